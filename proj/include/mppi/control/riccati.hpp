#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace mppi {

// Matrix exponential by scaling-and-squaring with a Taylor series. Fine
// for the small dense matrices used in gain synthesis.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd as = a * scale;
  Eigen::MatrixXd result =
      Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = result;
  for (int k = 1; k <= 20; ++k) {
    term = term * as / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

// Zero-order-hold discretization of a continuous-time pair (A, B) at step
// dt, via the exponential of the augmented matrix [[A, B], [0, 0]].
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize_zoh(
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double dt) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.cols();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = a * dt;
  aug.topRightCorner(n, m) = b * dt;
  const Eigen::MatrixXd e = expm(aug);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

inline double dare_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                            const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd btp = b.transpose() * p;
  const Eigen::MatrixXd gain_term =
      a.transpose() * btp.transpose() *
      (r + btp * b).ldlt().solve(btp * a);
  return (a.transpose() * p * a - p - gain_term + q).norm();
}

// Discrete algebraic Riccati equation
//   P = A'PA - A'PB (R + B'PB)^-1 B'PA + Q
// solved by the structure-preserving doubling iteration. Converges
// quadratically for stabilizable (A, B), Q >= 0, R > 0.
inline Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b,
                                  const Eigen::MatrixXd& q,
                                  const Eigen::MatrixXd& r) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != b.cols() || r.cols() != b.cols()) {
    throw std::invalid_argument("solve_dare: inconsistent dimensions");
  }

  Eigen::LLT<Eigen::MatrixXd> r_llt(r);
  if (r_llt.info() != Eigen::Success)
    throw std::invalid_argument("solve_dare: R must be positive definite");

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd a_k = a;
  Eigen::MatrixXd g_k = b * r_llt.solve(b.transpose());
  Eigen::MatrixXd h_k = q;

  constexpr int kMaxIterations = 100;
  constexpr double kTol = 1e-13;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Eigen::MatrixXd w = eye + g_k * h_k;
    const auto w_lu = w.partialPivLu();
    const Eigen::MatrixXd v1 = w_lu.solve(a_k);
    const Eigen::MatrixXd v2 = w_lu.solve(g_k.transpose()).transpose();
    g_k += a_k * v2 * a_k.transpose();
    const Eigen::MatrixXd h_next = h_k + v1.transpose() * h_k * a_k;
    a_k = a_k * v1;
    // An unstabilizable mode doubles without bound; the magnitude cap also
    // keeps the norms below the overflow point where the convergence test
    // would compare infinities.
    if (!h_next.allFinite() || !a_k.allFinite() || !g_k.allFinite() ||
        h_next.cwiseAbs().maxCoeff() > 1e100)
      throw std::runtime_error("solve_dare: iteration diverged");
    const double delta = (h_next - h_k).norm();
    h_k = h_next;
    if (delta <= kTol * std::max(1.0, h_k.norm())) {
      h_k = 0.5 * (h_k + h_k.transpose().eval());
      const double residual = dare_residual(a, b, q, r, h_k);
      if (!std::isfinite(residual) ||
          residual > 1e-10 * std::max(1.0, h_k.norm())) {
        std::ostringstream msg;
        msg << "solve_dare: converged iterate fails residual check ("
            << residual << ")";
        throw std::runtime_error(msg.str());
      }
      return h_k;
    }
  }
  std::ostringstream msg;
  msg << "solve_dare: no convergence after " << kMaxIterations
      << " iterations, residual " << dare_residual(a, b, q, r, h_k);
  throw std::runtime_error(msg.str());
}

inline double spectral_radius(const Eigen::MatrixXd& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

// State-feedback gain with the control law u = -K (x - x_ref). For LQI the
// state is augmented with the tracking-error integral.
struct GainMatrix {
  Eigen::MatrixXd k_fb;  // m x n_aug

  // Construction checks that the gain actually stabilizes the discrete
  // model it was synthesized on.
  GainMatrix(Eigen::MatrixXd gain, const Eigen::MatrixXd& a_d,
             const Eigen::MatrixXd& b_d)
      : k_fb(std::move(gain)) {
    if (!k_fb.allFinite())
      throw std::invalid_argument("GainMatrix: non-finite gain");
    const double rho = spectral_radius(a_d - b_d * k_fb);
    if (rho >= 1.0) {
      std::ostringstream msg;
      msg << "GainMatrix: closed loop is unstable (spectral radius " << rho
          << ")";
      throw std::invalid_argument(msg.str());
    }
  }
};

// LQR gain K = (R + B'PB)^-1 B'PA from the DARE solution.
inline GainMatrix lqr_gain(const Eigen::MatrixXd& a_d,
                           const Eigen::MatrixXd& b_d,
                           const Eigen::MatrixXd& q,
                           const Eigen::MatrixXd& r) {
  const Eigen::MatrixXd p = solve_dare(a_d, b_d, q, r);
  const Eigen::MatrixXd btp = b_d.transpose() * p;
  const Eigen::MatrixXd k = (r + btp * b_d).ldlt().solve(btp * a_d);
  return GainMatrix(k, a_d, b_d);
}

// LQI gain on the system augmented with the accumulated tracking error
//   z_{t+1} = z_t + dt (c_track x_t - ref).
// Returns [K_x, K_i]; the law is u = -K_x (x - x_ref) - K_i z.
inline GainMatrix lqi_gain(const Eigen::MatrixXd& a_d,
                           const Eigen::MatrixXd& b_d,
                           const Eigen::RowVectorXd& c_track, double dt,
                           const Eigen::MatrixXd& q_aug,
                           const Eigen::MatrixXd& r) {
  const Eigen::Index n = a_d.rows();
  const Eigen::Index m = b_d.cols();
  Eigen::MatrixXd a_aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
  a_aug.topLeftCorner(n, n) = a_d;
  a_aug.bottomLeftCorner(1, n) = dt * c_track;
  a_aug(n, n) = 1.0;
  Eigen::MatrixXd b_aug = Eigen::MatrixXd::Zero(n + 1, m);
  b_aug.topRows(n) = b_d;
  const Eigen::MatrixXd p = solve_dare(a_aug, b_aug, q_aug, r);
  const Eigen::MatrixXd btp = b_aug.transpose() * p;
  const Eigen::MatrixXd k = (r + btp * b_aug).ldlt().solve(btp * a_aug);
  return GainMatrix(k, a_aug, b_aug);
}

}  // namespace mppi
