#pragma once
// fisher.hpp: quantum Fisher information for single-mode Gaussian states and
// the matching homodyne error propagation. Precision is always reported as
// the standard deviation bound delta_xi = 1/sqrt(F) on the drive amplitude.

#include <nrsense/model.hpp>
#include <nrsense/moments.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace nrsense {

struct PrecisionReport {
  double qfi = 0.0;       // Fisher information for the drive amplitude
  double delta_xi = 0.0;  // 1/sqrt(qfi)
  double angle = 0.0;     // homodyne angle theta of X_theta = (b e^{-i th} + b* e^{i th})/sqrt2
  enum class Source { numeric, closed_form, monte_carlo } source = Source::numeric;
};

// ---- Gaussian quantum Fisher information ---------------------------------

// Full single-mode Gaussian expression in terms of the quadrature covariance
// C, its parameter derivative, and the mean derivative (q, p components):
//   F = 2 d^2/(4 d^2 + 1) Tr[(C^-1 C')^2] + 8 d'^2/(16 d^4 - 1) + m'^T C^-1 m'
// with d = sqrt(det C). The middle term is an exact 0/0 limit when d' = 0
// (any pure state reached along a physical path), handled explicitly.
inline double gaussian_qfi(const Eigen::Vector2d& mean_deriv, const Eigen::Matrix2d& cov,
                           const Eigen::Matrix2d& cov_deriv) {
  const double det = cov.determinant();
  if (!(det > 0.0) || !std::isfinite(det))
    throw std::invalid_argument("gaussian_qfi: covariance must be positive definite");
  const Eigen::Matrix2d inv = cov.inverse();
  const double d2 = det;            // d^2
  const double d = std::sqrt(det);  // d

  const Eigen::Matrix2d g = inv * cov_deriv;
  const double term1 = 2.0 * d2 / (4.0 * d2 + 1.0) * (g * g).trace();

  // d' = d/2 * Tr(C^-1 C'); the 16 d^4 - 1 denominator vanishes on pure
  // states, where d' = 0 along physical families.
  const double ddet_trace = g.trace();
  const double dprime = 0.5 * d * ddet_trace;
  double term2 = 0.0;
  if (dprime != 0.0) {
    const double denom = 16.0 * d2 * d2 - 1.0;
    if (std::abs(denom) < 1e-14)
      throw std::domain_error("gaussian_qfi: purity boundary with nonzero d'");
    term2 = 8.0 * dprime * dprime / denom;
  }

  const double term3 = mean_deriv.dot(inv * mean_deriv);
  return term1 + term2 + term3;
}

// ---- homodyne error propagation --------------------------------------------

// delta_xi = sd(X) / |d<X>/dxi|. The measured mean itself does not enter the
// estimate; it is accepted so call sites can pass the full moment triple.
inline double error_propagation(double mean_of_x, double var_of_x, double dmean_dxi) {
  (void)mean_of_x;
  if (!(var_of_x > 0.0) || !std::isfinite(var_of_x))
    throw std::invalid_argument("error_propagation: variance must be positive");
  if (dmean_dxi == 0.0)
    throw std::domain_error("error_propagation: zero signal derivative, no precision");
  return std::sqrt(var_of_x) / std::abs(dmean_dxi);
}

// ---- optimal quadrature ------------------------------------------------------

// Scans the homodyne family X_theta: the signal derivative
// d<X_theta>/dxi = sqrt2 Re(e^{-i theta} d<b>/dxi) peaks at theta = arg(d<b>/dxi).
// The returned precision is the Cramer-Rao value 1/sqrt(F) for the
// displacement information carried by the mode.
inline PrecisionReport optimal_quadrature(cplx dmean_b_dxi, const Eigen::Matrix2d& cov) {
  if (std::abs(dmean_b_dxi) == 0.0)
    throw std::domain_error("optimal_quadrature: zero signal derivative");
  PrecisionReport rep;
  rep.angle = std::arg(dmean_b_dxi);
  const Eigen::Vector2d mean_deriv(std::sqrt(2.0) * dmean_b_dxi.imag(),
                                   std::sqrt(2.0) * dmean_b_dxi.real());
  rep.qfi = gaussian_qfi(mean_deriv, cov, Eigen::Matrix2d::Zero());
  rep.delta_xi = 1.0 / std::sqrt(rep.qfi);
  rep.source = PrecisionReport::Source::numeric;
  return rep;
}

// Variance of the rotated quadrature X_theta under covariance C in (q, p)
// ordering: X_theta = cos(theta) p + sin(theta) q.
inline double quadrature_variance(const Eigen::Matrix2d& cov, double angle) {
  const Eigen::Vector2d dir(std::sin(angle), std::cos(angle));
  return dir.dot(cov * dir);
}

// ---- collective star readout -------------------------------------------------

// Precision of the summed readout Q = sum_j q_j against the drive. The
// headline number uses the idealized readout variance N/2 (independent
// vacuum spokes); the exact Var(Q) from the Lyapunov covariance is reported
// alongside because the lumped star convention does not preserve it for
// N > 1. The two are never merged.
struct CollectivePrecision {
  PrecisionReport report;        // based on assumed_variance
  double assumed_variance = 0.0; // N/2
  double exact_variance = 0.0;   // Var(sum_j q_j) from the steady covariance
  double delta_xi_exact = 0.0;   // error propagation with exact_variance
  double dmean_dxi = 0.0;        // d<Q>/dxi
};

inline CollectivePrecision collective_precision(const ModelSpec& spec) {
  const LinearSystem sys = build_star(spec);
  ModelSpec unit = spec;
  unit.xi = 1.0;  // means are linear in xi, so this solve is the derivative
  const Eigen::VectorXcd dmean = steady_mean(build_star(unit));
  const int n = spec.n_readout;

  double dq = 0.0;
  for (int j = 1; j <= n; ++j) dq += std::sqrt(2.0) * dmean(j).imag();

  const QuadratureSystem qsys = to_quadrature(sys);
  const Eigen::MatrixXd cov = steady_covariance(qsys);
  double var_q = 0.0;
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) var_q += cov(2 * j, 2 * k);

  CollectivePrecision out;
  out.dmean_dxi = dq;
  out.assumed_variance = 0.5 * n;
  out.exact_variance = var_q;
  if (dq == 0.0)
    throw std::domain_error("collective_precision: zero collective signal derivative");
  out.report.delta_xi = std::sqrt(out.assumed_variance) / std::abs(dq);
  out.report.qfi = 1.0 / (out.report.delta_xi * out.report.delta_xi);
  out.report.angle = std::arg(dmean(1));
  out.report.source = PrecisionReport::Source::numeric;
  out.delta_xi_exact = std::sqrt(var_q) / std::abs(dq);
  return out;
}

}  // namespace nrsense
