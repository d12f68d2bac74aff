#pragma once
// closedform.hpp: closed-form precision bank for the driven pair and star.
// Everything here is hard-coded algebra, kept deliberately separate from the
// numeric pipeline so the two can be compared as independent routes. Rates
// follow the cross-damping convention: lambda_eff is the damping each shared
// bath contributes per mode, gamma = kappa + lambda_eff the one-way pair rate.

#include <cmath>
#include <optional>
#include <stdexcept>

namespace nrsense {

// ---- thermal occupation ---------------------------------------------------

// Bose occupation n(omega, T) = 1/(exp(omega/T) - 1) with k_B = hbar = 1.
inline double bose_n(double omega, double temperature) {
  if (!(omega > 0.0)) throw std::domain_error("bose_n: omega must be > 0");
  if (temperature < 0.0) throw std::domain_error("bose_n: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

// ---- resonant steady pair ---------------------------------------------------

struct PairPrecision {
  double delta_xi_nr = 0.0;  // one-way branch
  double delta_xi_r = 0.0;   // two-way branch
  double eta = 0.0;          // delta_xi_nr / delta_xi_r
  double improvement = 0.0;  // 1/eta, the factor gained by the one-way pair
};

namespace detail {
inline void require_rates(double kappa, double lambda_eff, const char* who) {
  if (!(lambda_eff > 0.0))
    throw std::domain_error(std::string(who) + ": lambda_eff must be > 0 (precision diverges)");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw std::domain_error(std::string(who) + ": kappa must be finite and >= 0");
}
}  // namespace detail

// Steady-state homodyne precision of the resonant vacuum pair.
inline PairPrecision pair_steady(double kappa, double lambda_eff) {
  detail::require_rates(kappa, lambda_eff, "pair_steady");
  const double g = kappa + lambda_eff;
  PairPrecision out;
  out.delta_xi_nr = g * g / (4.0 * lambda_eff);
  out.delta_xi_r = (kappa * kappa + lambda_eff * lambda_eff) / (2.0 * lambda_eff);
  out.eta = out.delta_xi_nr / out.delta_xi_r;
  out.improvement = 1.0 / out.eta;
  return out;
}

// Precision ratio bound: 1/2 <= eta <= 1, with eta = 1 exactly at kappa = lambda_eff.
inline double pair_eta(double kappa, double lambda_eff) {
  detail::require_rates(kappa, lambda_eff, "pair_eta");
  const double g = kappa + lambda_eff;
  return g * g / (2.0 * (kappa * kappa + lambda_eff * lambda_eff));
}

// ---- transient pair -------------------------------------------------------

struct TransientPrecision {
  std::optional<double> delta_xi_nr;  // empty while the signal has not built up
  std::optional<double> delta_xi_r;
  std::optional<double> eta;
};

// Finite-time precision of the resonant vacuum pair prepared in vacuum at
// t = 0. Denominators start at zero (no signal yet); nonpositive values are
// reported as absent rather than clamped.
inline TransientPrecision pair_transient(double kappa, double lambda_eff, double t) {
  detail::require_rates(kappa, lambda_eff, "pair_transient");
  if (!(t > 0.0)) throw std::domain_error("pair_transient: t must be > 0");
  const double g = kappa + lambda_eff;
  TransientPrecision out;
  const double build_nr = 1.0 - std::exp(-g * t) * (1.0 + g * t);
  if (build_nr > 0.0) out.delta_xi_nr = g * g / (4.0 * lambda_eff * build_nr);
  const double build_r =
      lambda_eff - std::exp(-kappa * t) * (lambda_eff * std::cos(lambda_eff * t) +
                                           kappa * std::sin(lambda_eff * t));
  if (build_r > 0.0)
    out.delta_xi_r = (kappa * kappa + lambda_eff * lambda_eff) / (2.0 * build_r);
  if (out.delta_xi_nr && out.delta_xi_r) out.eta = *out.delta_xi_nr / *out.delta_xi_r;
  return out;
}

// ---- parallel star readout -------------------------------------------------

struct ParallelPrecision {
  double delta_xi_nr = 0.0;
  double delta_xi_r = 0.0;
  double eta = 0.0;
  // Limits of eta for large N in the three rate regimes.
  double eta_strong_coupling = 0.0;  // kappa << lambda_eff: 1/N^2
  double eta_matched_rate = 0.0;     // kappa = lambda_eff: 2N/(N^3 + 1)
  double eta_weak_coupling = 0.0;    // kappa >> lambda_eff: N/(N + 1)
};

// Collective readout of N spokes, idealized readout variance N/2.
inline ParallelPrecision parallel(double kappa, double lambda_eff, int n_readout) {
  detail::require_rates(kappa, lambda_eff, "parallel");
  if (n_readout < 1) throw std::domain_error("parallel: n_readout must be >= 1");
  const double n = n_readout;
  const double g = kappa + lambda_eff;
  const double gn = kappa + n * lambda_eff;
  ParallelPrecision out;
  out.delta_xi_nr = g * gn / (2.0 * std::sqrt(n) * lambda_eff * (n + 1.0));
  const double r_denom = kappa * kappa + n * n * n * lambda_eff * lambda_eff;
  out.delta_xi_r = r_denom / (2.0 * std::sqrt(n) * n * lambda_eff);
  out.eta = n * g * gn / ((n + 1.0) * r_denom);
  out.eta_strong_coupling = 1.0 / (n * n);
  out.eta_matched_rate = 2.0 * n / (n * n * n + 1.0);
  out.eta_weak_coupling = n / (n + 1.0);
  return out;
}

// ---- detuned pair ------------------------------------------------------------

struct DetunedPrecision {
  double delta_xi_nr = 0.0;
  double delta_xi_r = 0.0;
  double eta = 0.0;
};

// Both modes detuned by the same delta. The one-way branch only picks up the
// broadened response; the two-way branch splits into lambda_eff -+ delta lobes.
inline DetunedPrecision detuned_equal(double kappa, double lambda_eff, double delta) {
  detail::require_rates(kappa, lambda_eff, "detuned_equal");
  if (!std::isfinite(delta)) throw std::domain_error("detuned_equal: delta must be finite");
  const double g = kappa + lambda_eff;
  DetunedPrecision out;
  out.delta_xi_nr = (g * g + delta * delta) / (4.0 * lambda_eff);
  const double lo = kappa * kappa + (lambda_eff - delta) * (lambda_eff - delta);
  const double hi = kappa * kappa + (lambda_eff + delta) * (lambda_eff + delta);
  out.delta_xi_r = std::sqrt(lo * hi) / (2.0 * lambda_eff);
  out.eta = out.delta_xi_nr / out.delta_xi_r;
  return out;
}

// Opposite detunings: a at +delta_prime, b at -delta_prime. Here both
// branches broaden the same way and the ratio stays below 1.
inline DetunedPrecision detuned_opposite(double kappa, double lambda_eff, double delta_prime) {
  detail::require_rates(kappa, lambda_eff, "detuned_opposite");
  if (!std::isfinite(delta_prime))
    throw std::domain_error("detuned_opposite: delta_prime must be finite");
  const double g = kappa + lambda_eff;
  DetunedPrecision out;
  out.delta_xi_nr = (g * g + delta_prime * delta_prime) / (4.0 * lambda_eff);
  out.delta_xi_r =
      (kappa * kappa + lambda_eff * lambda_eff + delta_prime * delta_prime) / (2.0 * lambda_eff);
  out.eta = out.delta_xi_nr / out.delta_xi_r;
  return out;
}

// ---- thermal pair ---------------------------------------------------------

// The printed thermal formulas mix two rate symbols. The reading flag states
// which rate the thermal excess terms use: cross_damping takes them at
// lambda_eff (the reading that is algebraically consistent with the exact
// second moments and with the equal-rate limit), master_rate takes them at
// sqrt(2) * lambda_eff (the shared-bath rate before per-mode splitting).
enum class ThermalReading { cross_damping, master_rate };

struct ThermalPrecision {
  double delta_xi_nr = 0.0;  // base * bracket (linear-in-occupation form)
  double delta_xi_r = 0.0;
  double eta = 0.0;          // mu * vacuum eta
  double mu = 0.0;           // thermal degradation factor bracket_nr/bracket_r
  double bracket_nr = 0.0;   // dimensionless thermal excess factors
  double bracket_r = 0.0;
  // Variance-consistent reading of the same brackets: the bracket equals
  // 2 Var of the measured quadrature, so precision scales with its root.
  double delta_xi_nr_sqrt = 0.0;
  double delta_xi_r_sqrt = 0.0;
  double eta_sqrt = 0.0;
};

// Thermal local baths at occupations n_a, n_b (shared bath stays vacuum).
inline ThermalPrecision thermal(double kappa, double lambda_eff, double n_a, double n_b,
                                ThermalReading reading = ThermalReading::cross_damping) {
  detail::require_rates(kappa, lambda_eff, "thermal");
  if (!(n_a >= 0.0) || !(n_b >= 0.0))
    throw std::domain_error("thermal: occupations must be >= 0");
  const double lam =
      (reading == ThermalReading::cross_damping) ? lambda_eff : std::sqrt(2.0) * lambda_eff;
  const double g = kappa + lambda_eff;
  const double gl = kappa + lam;  // mixes into the one-way denominators
  const double base_nr = g * g / (4.0 * lambda_eff);
  const double base_r = (kappa * kappa + lambda_eff * lambda_eff) / (2.0 * lambda_eff);

  ThermalPrecision out;
  out.bracket_nr =
      1.0 + (4.0 * n_a * kappa * lam * lam + 2.0 * n_b * kappa * g * g) / (gl * gl * gl);
  out.bracket_r = 1.0 + (n_a * lam * lam + n_b * (2.0 * kappa * kappa + lam * lam)) /
                            (kappa * kappa + lambda_eff * lambda_eff);
  out.delta_xi_nr = base_nr * out.bracket_nr;
  out.delta_xi_r = base_r * out.bracket_r;
  out.mu = out.bracket_nr / out.bracket_r;
  out.eta = out.mu * pair_eta(kappa, lambda_eff);
  out.delta_xi_nr_sqrt = base_nr * std::sqrt(out.bracket_nr);
  out.delta_xi_r_sqrt = base_r * std::sqrt(out.bracket_r);
  out.eta_sqrt = out.delta_xi_nr_sqrt / out.delta_xi_r_sqrt;
  return out;
}

// Equal-rate limit kappa = lambda_eff with both baths at occupation n:
// eta = mu = 1 - n/(2 (1 + 2n)).
inline double thermal_equal_rate_eta(double n) {
  if (!(n >= 0.0)) throw std::domain_error("thermal_equal_rate_eta: n must be >= 0");
  return 1.0 - n / (2.0 * (1.0 + 2.0 * n));
}

}  // namespace nrsense
