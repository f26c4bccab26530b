#include "catch_amalgamated.hpp"

#include <cmath>

#include "mppi/control/riccati.hpp"
#include "mppi/math/rng.hpp"

using namespace mppi;

TEST_CASE("expm closed forms") {
  SECTION("zero matrix maps to identity") {
    const Eigen::MatrixXd e = expm(Eigen::MatrixXd::Zero(3, 3));
    CHECK((e - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-14);
  }

  SECTION("diagonal matrices exponentiate entrywise") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -2.0;
    const Eigen::MatrixXd e = expm(a);
    CHECK(e(0, 0) == Catch::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(e(1, 1) == Catch::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(std::abs(e(0, 1)) < 1e-14);
    CHECK(std::abs(e(1, 0)) < 1e-14);
  }

  SECTION("nilpotent series terminates exactly") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 1) = 1.0;
    const Eigen::MatrixXd e = expm(a);
    CHECK(e(0, 0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(e(0, 1) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(e(1, 0)) < 1e-15);
    CHECK(e(1, 1) == Catch::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("zero-order hold discretization") {
  SECTION("pure integrator gives identity and B dt") {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    Eigen::MatrixXd b(2, 1);
    b << 1.0, 3.0;
    const auto [ad, bd] = discretize_zoh(a, b, 0.05);
    CHECK((ad - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
    CHECK((bd - 0.05 * b).norm() < 1e-14);
  }

  SECTION("scalar system matches the exponential formula") {
    const double alpha = -0.7;
    const double beta = 2.0;
    const double dt = 0.3;
    Eigen::MatrixXd a(1, 1), b(1, 1);
    a << alpha;
    b << beta;
    const auto [ad, bd] = discretize_zoh(a, b, dt);
    const double ad_ref = std::exp(alpha * dt);
    const double bd_ref = beta * (ad_ref - 1.0) / alpha;
    CHECK(ad(0, 0) == Catch::Approx(ad_ref).epsilon(1e-12));
    CHECK(bd(0, 0) == Catch::Approx(bd_ref).epsilon(1e-12));
  }
}

TEST_CASE("dare solutions against closed forms") {
  SECTION("B = 0 reduces to a discrete Lyapunov equation") {
    Eigen::MatrixXd a(1, 1), b(1, 1), q(1, 1), r(1, 1);
    a << 0.5;
    b << 0.0;
    q << 1.0;
    r << 1.0;
    // p = 0.25 p + 1
    const Eigen::MatrixXd p = solve_dare(a, b, q, r);
    CHECK(p(0, 0) == Catch::Approx(4.0 / 3.0).epsilon(1e-12));
  }

  SECTION("unit scalar system lands on the golden ratio") {
    Eigen::MatrixXd one(1, 1);
    one << 1.0;
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const Eigen::MatrixXd p = solve_dare(one, one, one, one);
    CHECK(p(0, 0) == Catch::Approx(phi).epsilon(1e-12));
    const GainMatrix k = lqr_gain(one, one, one, one);
    CHECK(k.k_fb(0, 0) == Catch::Approx(1.0 / phi).epsilon(1e-9));
  }

  SECTION("solution scales linearly with the weights") {
    Eigen::MatrixXd a(2, 2), b(2, 1);
    a << 0.9, 0.2, 0.0, 0.7;
    b << 0.0, 1.0;
    const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(2, 2);
    const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(1, 1);
    const Eigen::MatrixXd p = solve_dare(a, b, q, r);
    const Eigen::MatrixXd p_scaled = solve_dare(a, b, 3.7 * q, 3.7 * r);
    CHECK((p_scaled - 3.7 * p).norm() < 1e-9 * p.norm());
  }
}

TEST_CASE("dare solutions on random stabilizable systems") {
  const CounterRng rng(777, RngDomain::scenario);
  for (std::uint32_t trial = 0; trial < 25; ++trial) {
    Eigen::MatrixXd a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        a(i, j) = 0.5 * rng.normal(trial, 0, static_cast<std::uint32_t>(i),
                                   static_cast<std::uint32_t>(j));
    const double rho = spectral_radius(a);
    if (rho > 0.9) a *= 0.9 / rho;
    Eigen::MatrixXd b(4, 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j)
        b(i, j) = rng.normal(trial, 1, static_cast<std::uint32_t>(i),
                             static_cast<std::uint32_t>(j));
    const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(4, 4);
    const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(2, 2);

    const Eigen::MatrixXd p = solve_dare(a, b, q, r);
    CHECK(dare_residual(a, b, q, r, p) < 1e-9 * std::max(1.0, p.norm()));
    CHECK((p - p.transpose()).norm() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
    CHECK(es.eigenvalues().minCoeff() > -1e-9);

    const GainMatrix k = lqr_gain(a, b, q, r);
    CHECK(spectral_radius(a - b * k.k_fb) < 1.0);
  }
}

TEST_CASE("dare rejects hopeless problems") {
  Eigen::MatrixXd a(1, 1), b(1, 1), q(1, 1), r(1, 1);
  a << 2.0;   // unstable and uncontrollable with b = 0
  b << 0.0;
  q << 1.0;
  r << 1.0;
  CHECK_THROWS_AS(solve_dare(a, b, q, r), std::runtime_error);

  Eigen::MatrixXd r_bad(1, 1);
  r_bad << -1.0;
  b << 1.0;
  CHECK_THROWS_AS(solve_dare(a, b, q, r_bad), std::invalid_argument);
  CHECK_THROWS_AS(solve_dare(a, Eigen::MatrixXd::Zero(2, 1), q, r),
                  std::invalid_argument);
}

TEST_CASE("gain matrix construction verifies stability") {
  Eigen::MatrixXd a(1, 1), b(1, 1);
  a << 1.5;
  b << 1.0;
  CHECK_THROWS_AS(GainMatrix(Eigen::MatrixXd::Zero(1, 1), a, b),
                  std::invalid_argument);
  CHECK_NOTHROW(GainMatrix(Eigen::MatrixXd::Constant(1, 1, 1.0), a, b));
  Eigen::MatrixXd nan_gain(1, 1);
  nan_gain << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(GainMatrix(nan_gain, a, b), std::invalid_argument);
}

TEST_CASE("lqi augmentation yields a stable integrating loop") {
  Eigen::MatrixXd a(1, 1), b(1, 1);
  a << 0.9;
  b << 1.0;
  Eigen::RowVectorXd c(1);
  c << 1.0;
  const double dt = 0.1;
  const GainMatrix k =
      lqi_gain(a, b, c, dt, Eigen::MatrixXd::Identity(2, 2),
               Eigen::MatrixXd::Identity(1, 1));
  REQUIRE(k.k_fb.rows() == 1);
  REQUIRE(k.k_fb.cols() == 2);

  // Rebuild the augmented closed loop and confirm it contracts.
  Eigen::MatrixXd a_aug(2, 2), b_aug(2, 1);
  a_aug << a(0, 0), 0.0, dt, 1.0;
  b_aug << b(0, 0), 0.0;
  CHECK(spectral_radius(a_aug - b_aug * k.k_fb) < 1.0);

  // With integral action, a constant reference is tracked exactly: the
  // closed loop's fixed point has c x = ref.
  const double ref = 2.0;
  double x = 0.0;
  double z = 0.0;
  for (int t = 0; t < 2000; ++t) {
    const double u = -k.k_fb(0, 0) * x - k.k_fb(0, 1) * z;
    const double x_next = a(0, 0) * x + b(0, 0) * u;
    z += dt * (x - ref);
    x = x_next;
  }
  CHECK(x == Catch::Approx(ref).margin(1e-6));
}
