#pragma once
// moments.hpp: first and second moment flows for linear bosonic networks.
// The one-way drift is defective (a Jordan block at the cancellation point),
// so every propagator here goes through scaling-and-squaring matrix
// exponentials or Schur factorizations; nothing diagonalizes the drift.

#include <nrsense/model.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace nrsense {

// Means and covariance in quadrature ordering (q_a, p_a, q_b1, p_b1, ...).
struct MomentState {
  double time = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Drift spectra may sit arbitrarily close to the imaginary axis; steady-state
// solvers refuse anything to the right of this margin.
inline constexpr double k_stability_slack = -1e-9;

// ---- matrix exponential ---------------------------------------------------

// Scaling-and-squaring with a Pade rational kernel (handles defective input).
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: square matrix required");
  return m.exp();
}

inline Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: square matrix required");
  return m.exp();
}

// ---- first moments ----------------------------------------------------------

// x(t) = e^{Mt} x0 + int_0^t e^{Ms} v ds, evaluated through the augmented
// block exponential exp(t [[M, v], [0, 0]]). This stays exact when M is
// singular or defective, where M^{-1}(e^{Mt} - 1)v is unavailable.
inline Eigen::VectorXcd propagate_mean(const Eigen::MatrixXcd& drift,
                                       const Eigen::VectorXcd& drive,
                                       const Eigen::VectorXcd& x0, double t) {
  const int n = static_cast<int>(drift.rows());
  if (drift.cols() != n || drive.size() != n || x0.size() != n)
    throw std::invalid_argument("propagate_mean: dimension mismatch");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("propagate_mean: t must be finite and >= 0");
  Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = drift;
  aug.topRightCorner(n, 1) = drive;
  const Eigen::MatrixXcd f = expm(Eigen::MatrixXcd(t * aug));
  return f.topLeftCorner(n, n) * x0 + f.topRightCorner(n, 1);
}

inline Eigen::VectorXcd propagate_mean(const LinearSystem& sys,
                                       const Eigen::VectorXcd& x0, double t) {
  return propagate_mean(sys.drift, sys.drive, x0, t);
}

// Solves drift * x + drive = 0. Refuses unstable or marginal drifts, and
// checks the solve residual against a relative bound of 1e-12.
inline Eigen::VectorXcd steady_mean(const Eigen::MatrixXcd& drift,
                                    const Eigen::VectorXcd& drive) {
  if (drift.rows() != drift.cols() || drive.size() != drift.rows())
    throw std::invalid_argument("steady_mean: dimension mismatch");
  const double margin = stability_margin(drift);
  if (!(margin < k_stability_slack))
    throw std::domain_error("steady_mean: drift is not strictly stable");
  Eigen::VectorXcd x = drift.partialPivLu().solve(-drive);
  const double scale = drift.norm() * x.norm() + drive.norm();
  const double residual = (drift * x + drive).norm();
  if (residual > 1e-12 * std::max(1.0, scale))
    throw std::runtime_error("steady_mean: solve residual exceeds tolerance");
  return x;
}

inline Eigen::VectorXcd steady_mean(const LinearSystem& sys) {
  return steady_mean(sys.drift, sys.drive);
}

// ---- second moments -----------------------------------------------------

// Solves A C + C A^T + D = 0 for stable real A by the Schur method:
// complexify, A = U T U*, back-substitute columns of the triangular system,
// then symmetrize. O(n^3), no Kronecker blowup at star sizes.
inline Eigen::MatrixXd steady_covariance(const Eigen::MatrixXd& drift_q,
                                         const Eigen::MatrixXd& diffusion) {
  const int n = static_cast<int>(drift_q.rows());
  if (drift_q.cols() != n || diffusion.rows() != n || diffusion.cols() != n)
    throw std::invalid_argument("steady_covariance: dimension mismatch");
  const Eigen::MatrixXcd a = drift_q.cast<cplx>();
  const double margin = stability_margin(a);
  if (!(margin < k_stability_slack))
    throw std::domain_error("steady_covariance: drift is not strictly stable");

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("steady_covariance: Schur factorization failed");
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd& u = schur.matrixU();
  const Eigen::MatrixXcd q = u.adjoint() * diffusion.cast<cplx>() * u;

  // T Y + Y T^dagger + Q = 0; columns from the last one down.
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd shifted(n, n);
  for (int j = n - 1; j >= 0; --j) {
    Eigen::VectorXcd rhs = -q.col(j);
    for (int k = j + 1; k < n; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
    shifted = t;
    shifted.diagonal().array() += std::conj(t(j, j));
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }

  Eigen::MatrixXd c = (u * y * u.adjoint()).real();
  c = 0.5 * (c + c.transpose()).eval();

  const double scale = drift_q.norm() * c.norm() + diffusion.norm();
  const double residual = (drift_q * c + c * drift_q.transpose() + diffusion).norm();
  if (residual > 1e-10 * std::max(1.0, scale))
    throw std::runtime_error("steady_covariance: solve residual exceeds tolerance");
  return c;
}

inline Eigen::MatrixXd steady_covariance(const QuadratureSystem& sys) {
  return steady_covariance(sys.drift, sys.diffusion);
}

// C(t) = e^{At} C0 e^{A^T t} + W(t), with the driven part
// W(t) = int_0^t e^{As} D e^{A^T s} ds read off one augmented exponential
// exp(t [[A, D], [0, -A^T]]) = [[F, G], [0, F^-T]], W = G F^T.
inline Eigen::MatrixXd transient_covariance(const Eigen::MatrixXd& drift_q,
                                            const Eigen::MatrixXd& diffusion,
                                            const Eigen::MatrixXd& c0, double t) {
  const int n = static_cast<int>(drift_q.rows());
  if (drift_q.cols() != n || diffusion.rows() != n || c0.rows() != n || c0.cols() != n)
    throw std::invalid_argument("transient_covariance: dimension mismatch");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("transient_covariance: t must be finite and >= 0");
  // The -A^T block makes exp(t * aug) grow like e^{+|A| t} for stable A, so a
  // single exponential overflows once |A| t goes past a few hundred. Equal
  // substeps keep the semigroup exact while bounding each exponential.
  const double budget = drift_q.cwiseAbs().rowwise().sum().maxCoeff() * t;
  const int n_chunks = std::max(1, static_cast<int>(std::ceil(budget / 20.0)));
  const double dt = t / n_chunks;
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = drift_q;
  aug.topRightCorner(n, n) = diffusion;
  aug.bottomRightCorner(n, n) = -drift_q.transpose();
  const Eigen::MatrixXd f = expm(Eigen::MatrixXd(dt * aug));
  const Eigen::MatrixXd f11 = f.topLeftCorner(n, n);
  const Eigen::MatrixXd w = f.topRightCorner(n, n) * f11.transpose();
  Eigen::MatrixXd c = c0;
  for (int k = 0; k < n_chunks; ++k)
    c = (f11 * c * f11.transpose() + w).eval();
  return 0.5 * (c + c.transpose()).eval();
}

inline MomentState transient_state(const QuadratureSystem& sys, const MomentState& init,
                                   double t) {
  // Quadrature mean flow shares the augmented-exponential route through the
  // complexified vector; here the system is already real.
  const int n = static_cast<int>(sys.drift.rows());
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = sys.drift;
  aug.topRightCorner(n, 1) = sys.drive;
  const Eigen::MatrixXd f = expm(Eigen::MatrixXd(t * aug));
  MomentState out;
  out.time = init.time + t;
  out.mean = f.topLeftCorner(n, n) * init.mean + f.topRightCorner(n, 1);
  out.covariance = transient_covariance(sys.drift, sys.diffusion, init.covariance, t);
  return out;
}

}  // namespace nrsense
