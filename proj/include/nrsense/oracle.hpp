#pragma once
// oracle.hpp: slow reference implementations used by tests and the
// verification report. These deliberately avoid the production code paths:
// the exponential is a truncated Taylor series with scaling, the Lyapunov
// solve is a dense Kronecker vectorization, and integrals use adaptive
// Simpson. Keep them independent so cross-checks stay meaningful.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace nrsense::oracle {

// Taylor-series exponential with scaling and repeated squaring. Terms are
// added until they stop changing the partial sum in double precision.
inline Eigen::MatrixXcd series_expm(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("series_expm: square matrix required");
  const int n = static_cast<int>(m.rows());
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // induced inf-norm
  while (norm > 0.25 && squarings < 60) {
    norm *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXcd a = m / std::pow(2.0, squarings);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= 200; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    const Eigen::MatrixXcd next = sum + term;
    if (next.isApprox(sum, 0.0) || term.norm() <= 1e-300) break;
    sum = next;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

inline Eigen::MatrixXd series_expm(const Eigen::MatrixXd& m) {
  return series_expm(Eigen::MatrixXcd(m.cast<std::complex<double>>())).real();
}

// Dense vectorized Lyapunov solve for A C + C A^T + D = 0:
// (I kron A + A kron I) vec(C) = -vec(D). Cubic in n^2; test sizes only.
inline Eigen::MatrixXd lyapunov_kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || d.rows() != n || d.cols() != n)
    throw std::invalid_argument("lyapunov_kron: dimension mismatch");
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec is column-major: entry (i, j) of C sits at i + n j.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        big(i + n * j, k + n * j) += a(i, k);  // A C term
        big(i + n * j, i + n * k) += a(j, k);  // C A^T term
      }
  Eigen::VectorXd rhs(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) rhs(i + n * j) = -d(i, j);
  const Eigen::VectorXd sol = big.partialPivLu().solve(rhs);
  Eigen::MatrixXd c(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) c(i, j) = sol(i + n * j);
  return 0.5 * (c + c.transpose()).eval();
}

// Adaptive Simpson quadrature on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int depth = 48) {
  auto rule = [&f](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
  };
  std::function<double(double, double, double, int)> rec =
      [&](double lo, double hi, double whole, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = rule(lo, mid);
    const double right = rule(mid, hi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
  };
  return rec(a, b, rule(a, b), depth);
}

}  // namespace nrsense::oracle
