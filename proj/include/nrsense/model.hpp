#pragma once
// model.hpp: builders for driven, dissipatively coupled bosonic networks.
// A sensing mode a is driven by a coherent amplitude xi and read out through
// one or more modes b_j, coupled either through a shared lossy channel
// (dissipative coupling) or a beam-splitter interaction (coherent coupling).
// Tuning the coherent phase against the dissipative rate makes the coupling
// one-way: a drives b while b never acts back on a.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nrsense {

using cplx = std::complex<double>;

// ---- coupling variants ------------------------------------------------

// One-way coupling: dissipative structure with the coherent hop J locked to
// i * (cross-damping rate), which cancels the backaction entry exactly.
struct Nonreciprocal {};

// Two-way coupling: purely coherent hop with |J| matched to the dissipative
// models' rate; no shared bath.
struct Reciprocal {};

// Dissipative structure with a caller-chosen coherent hop J.
struct CustomJ {
  cplx J{0.0, 0.0};
};

using Coupling = std::variant<Nonreciprocal, Reciprocal, CustomJ>;

// Star cross-damping bookkeeping. `lumped` places the N-fold aggregated rate
// on every hub<->spoke link (the model this library is built to analyze);
// `per_bath` derives links from N independent shared baths of rate
// lambda_eff each, which keeps vacuum an exact fixed point for every N.
// The two coincide at N = 1. `per_bath` exists as a diagnostic.
enum class StarConvention { lumped, per_bath };

// ---- model specification ----------------------------------------------

struct ModelSpec {
  int n_readout = 1;        // N readout modes b_1..b_N; N = 1 is the plain pair
  double kappa = 1.0;       // local damping rate, identical on every mode
  double lambda_eff = 1.0;  // cross-damping rate per shared bath
  double xi = 1.0;          // coherent drive amplitude on mode a
  double detuning_a = 0.0;  // rotating-frame detuning of mode a
  double detuning_b = 0.0;  // rotating-frame detuning of every readout mode
  double n_a = 0.0;         // thermal occupation of the local bath of a
  double n_b = 0.0;         // thermal occupation of each local readout bath
  Coupling coupling = Nonreciprocal{};
  StarConvention convention = StarConvention::lumped;
};

// First-moment Langevin model d<A>/dt = drift * <A> + drive, with quantum
// noise entering through input_matrix columns (one column per bath).
struct LinearSystem {
  Eigen::MatrixXcd drift;
  Eigen::VectorXcd drive;
  Eigen::MatrixXcd input_matrix;
  Eigen::VectorXd bath_occupations;  // one thermal occupation per bath column
};

// Real quadrature image, ordering (q_a, p_a, q_b1, p_b1, ...) with
// q = (b - b†)/(i sqrt 2), p = (b + b†)/sqrt 2.
// Covariance flow is dC/dt = drift C + C drift^T + diffusion, calibrated so
// that vacuum inputs give the steady covariance (1/2) * Identity whenever the
// drift's symmetric part matches the bath assignment.
struct QuadratureSystem {
  Eigen::MatrixXd drift;
  Eigen::VectorXd drive;
  Eigen::MatrixXd diffusion;
};

// ---- validation ---------------------------------------------------------

inline void validate(const ModelSpec& spec, const char* who) {
  auto fin = [](double x) { return std::isfinite(x); };
  if (spec.n_readout < 1)
    throw std::invalid_argument(std::string(who) + ": n_readout must be >= 1");
  if (!fin(spec.kappa) || spec.kappa < 0.0)
    throw std::invalid_argument(std::string(who) + ": kappa must be finite and >= 0");
  if (!fin(spec.lambda_eff) || spec.lambda_eff < 0.0)
    throw std::invalid_argument(std::string(who) + ": lambda_eff must be finite and >= 0");
  if (!fin(spec.xi))
    throw std::invalid_argument(std::string(who) + ": xi must be finite");
  if (!fin(spec.detuning_a) || !fin(spec.detuning_b))
    throw std::invalid_argument(std::string(who) + ": detunings must be finite");
  if (!fin(spec.n_a) || spec.n_a < 0.0 || !fin(spec.n_b) || spec.n_b < 0.0)
    throw std::invalid_argument(std::string(who) + ": occupations must be finite and >= 0");
  if (const auto* c = std::get_if<CustomJ>(&spec.coupling)) {
    if (!fin(c->J.real()) || !fin(c->J.imag()))
      throw std::invalid_argument(std::string(who) + ": custom J must be finite");
  }
}

// ---- builders -----------------------------------------------------------

// Star with hub a and N spokes b_j. Dissipative couplings (Nonreciprocal,
// CustomJ) add one shared bath per spoke; Reciprocal uses local baths only
// and a coherent hop of magnitude N * lambda_eff locked to the phase that the
// dissipative model cancels at.
inline LinearSystem build_star(const ModelSpec& spec) {
  validate(spec, "build_star");
  const int n = spec.n_readout;
  const int m = 1 + n;
  const double k = spec.kappa;
  const double lam = spec.lambda_eff;
  const cplx i_da(0.0, spec.detuning_a);
  const cplx i_db(0.0, spec.detuning_b);

  LinearSystem sys;
  sys.drift = Eigen::MatrixXcd::Zero(m, m);
  sys.drive = Eigen::VectorXcd::Zero(m);
  sys.drive(0) = cplx(0.0, -spec.xi);

  if (std::holds_alternative<Reciprocal>(spec.coupling)) {
    // Coherent hop J = i N lambda_eff: hub row gains +N lambda_eff, spoke
    // rows -N lambda_eff. Local baths only.
    sys.drift(0, 0) = -k - i_da;
    for (int j = 1; j < m; ++j) {
      sys.drift(j, j) = -k - i_db;
      sys.drift(0, j) = cplx(n * lam, 0.0);
      sys.drift(j, 0) = cplx(-n * lam, 0.0);
    }
    sys.input_matrix = Eigen::MatrixXcd::Zero(m, m);
    sys.bath_occupations = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < m; ++j) sys.input_matrix(j, j) = std::sqrt(2.0 * k);
    sys.bath_occupations(0) = spec.n_a;
    for (int j = 1; j < m; ++j) sys.bath_occupations(j) = spec.n_b;
    return sys;
  }

  // Dissipative family. The hub<->spoke link weights depend on the
  // convention; the coherent hop J defaults to the exact cancellation point.
  const double hub_weight = (spec.convention == StarConvention::lumped) ? n * lam : lam;
  cplx J;
  if (std::holds_alternative<Nonreciprocal>(spec.coupling)) {
    J = cplx(0.0, hub_weight);  // cancels drift(a, b_j) exactly
  } else {
    J = std::get<CustomJ>(spec.coupling).J;
  }

  sys.drift(0, 0) = -(k + n * lam) - i_da;
  for (int j = 1; j < m; ++j) {
    sys.drift(j, j) = -(k + lam) - i_db;
    sys.drift(0, j) = -(cplx(hub_weight, 0.0) + cplx(0.0, 1.0) * J);
    sys.drift(j, 0) = -(cplx(lam, 0.0) + cplx(0.0, 1.0) * std::conj(J));
  }

  // Baths: m local ones, then one shared bath per spoke with amplitude
  // sqrt(2 lambda_eff) into the hub row and the spoke row. The shared baths
  // stay at vacuum; only local baths carry thermal occupation.
  const int n_bath = m + n;
  sys.input_matrix = Eigen::MatrixXcd::Zero(m, n_bath);
  sys.bath_occupations = Eigen::VectorXd::Zero(n_bath);
  for (int j = 0; j < m; ++j) sys.input_matrix(j, j) = std::sqrt(2.0 * k);
  sys.bath_occupations(0) = spec.n_a;
  for (int j = 1; j < m; ++j) sys.bath_occupations(j) = spec.n_b;
  for (int j = 0; j < n; ++j) {
    sys.input_matrix(0, m + j) = std::sqrt(2.0 * lam);
    sys.input_matrix(1 + j, m + j) = std::sqrt(2.0 * lam);
  }
  return sys;
}

// Driven pair: the N = 1 star.
inline LinearSystem build_pair(const ModelSpec& spec) {
  if (spec.n_readout != 1)
    throw std::invalid_argument("build_pair: n_readout must be 1 (use build_star)");
  return build_star(spec);
}

// ---- quadrature realization ---------------------------------------------

// Real 2x2 image of a complex scalar acting on (q, p).
inline Eigen::Matrix2d real_block(cplx m) {
  Eigen::Matrix2d b;
  b << m.real(), m.imag(), -m.imag(), m.real();
  return b;
}

// Real 2m x 2m image of a complex m x m matrix.
inline Eigen::MatrixXd real_block_embed(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd r(2 * n, 2 * static_cast<int>(m.cols()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < static_cast<int>(m.cols()); ++j)
      r.block<2, 2>(2 * i, 2 * j) = real_block(m(i, j));
  return r;
}

// Quadrature means from complex mode means: q = sqrt2 Im<b>, p = sqrt2 Re<b>.
inline Eigen::VectorXd quadrature_mean(const Eigen::VectorXcd& mean) {
  const int n = static_cast<int>(mean.size());
  Eigen::VectorXd r(2 * n);
  for (int j = 0; j < n; ++j) {
    r(2 * j) = std::sqrt(2.0) * mean(j).imag();
    r(2 * j + 1) = std::sqrt(2.0) * mean(j).real();
  }
  return r;
}

inline Eigen::VectorXcd complex_mean(const Eigen::VectorXd& quad) {
  if (quad.size() % 2 != 0)
    throw std::invalid_argument("complex_mean: quadrature vector must have even size");
  const int n = static_cast<int>(quad.size()) / 2;
  Eigen::VectorXcd r(n);
  for (int j = 0; j < n; ++j)
    r(j) = cplx(quad(2 * j + 1), quad(2 * j)) / std::sqrt(2.0);
  return r;
}

// Quadrature image of the full Langevin model. The diffusion is
//   D = sum_l (n_l + 1/2) * R(col_l) R(col_l)^T
// with R the real block image; equivalently the real image of
// input_matrix diag(n + 1/2) input_matrix^dagger. With this calibration a
// single damped mode at occupation n has steady variance n + 1/2 in both
// quadratures.
inline QuadratureSystem to_quadrature(const LinearSystem& sys) {
  const auto b = static_cast<int>(sys.input_matrix.cols());
  if (sys.bath_occupations.size() != b)
    throw std::invalid_argument("to_quadrature: one occupation per bath column required");
  QuadratureSystem q;
  q.drift = real_block_embed(sys.drift);
  q.drive = quadrature_mean(sys.drive);  // same sqrt2 (Im, Re) interleave
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(sys.drift.rows(), sys.drift.rows());
  for (int l = 0; l < b; ++l) {
    const double w = sys.bath_occupations(l) + 0.5;
    if (sys.bath_occupations(l) < 0.0)
      throw std::invalid_argument("to_quadrature: bath occupations must be >= 0");
    h += w * sys.input_matrix.col(l) * sys.input_matrix.col(l).adjoint();
  }
  q.diffusion = real_block_embed(h);
  q.diffusion = 0.5 * (q.diffusion + q.diffusion.transpose()).eval();
  return q;
}

// ---- stability ------------------------------------------------------------

// Largest real part of the drift spectrum; negative means asymptotically
// stable. Works on defective drifts (eigenvalues only, no eigenvectors).
inline double stability_margin(const Eigen::MatrixXcd& drift) {
  if (drift.rows() != drift.cols())
    throw std::invalid_argument("stability_margin: square matrix required");
  return drift.eigenvalues().real().maxCoeff();
}

inline double stability_margin(const LinearSystem& sys) {
  return stability_margin(sys.drift);
}

inline double stability_margin(const QuadratureSystem& sys) {
  Eigen::MatrixXcd m = sys.drift.cast<cplx>();
  return stability_margin(m);
}

}  // namespace nrsense
