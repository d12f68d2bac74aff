#pragma once
// runner.hpp: turns a scenario into result tables. Every row carries both
// coupling branches so the precision ratio is formed within one row; when the
// row falls in a regime with a known formula the closed-form values and the
// relative deviation between the two routes are attached alongside.

#include <nrsense/closedform.hpp>
#include <nrsense/fisher.hpp>
#include <nrsense/model.hpp>
#include <nrsense/moments.hpp>
#include <nrsense/scenario.hpp>
#include <nrsense/table.hpp>
#include <nrsense/trajectory.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace nrsense {

// One coupling branch of one parameter point, steady state.
struct BranchSteady {
  bool stable = false;
  double delta_xi = 0.0;        // readout-convention variance (N/2 for stars)
  double delta_xi_exact = 0.0;  // variance taken from the steady covariance
  double variance = 0.0;        // quadrature variance used for delta_xi
  double angle = 0.0;           // homodyne angle maximizing the signal
  double qfi = 0.0;             // full Gaussian Fisher information
};

inline BranchSteady analyze_steady(const ModelSpec& m) {
  BranchSteady r;
  const LinearSystem sys = build_star(m);
  if (!(stability_margin(sys) < k_stability_slack)) return r;
  r.stable = true;
  if (m.n_readout == 1) {
    ModelSpec unit = m;
    unit.xi = 1.0;  // means are linear in xi, so the unit solve is d<.>/dxi
    const cplx db = steady_mean(build_star(unit))(1);
    const Eigen::Matrix2d cb = steady_covariance(to_quadrature(sys)).block<2, 2>(2, 2);
    r.angle = std::arg(db);
    r.variance = quadrature_variance(cb, r.angle);
    r.delta_xi = std::sqrt(r.variance) / (std::sqrt(2.0) * std::abs(db));
    r.delta_xi_exact = r.delta_xi;
    const Eigen::Vector2d md(std::sqrt(2.0) * db.imag(), std::sqrt(2.0) * db.real());
    r.qfi = gaussian_qfi(md, cb, Eigen::Matrix2d::Zero());
  } else {
    const CollectivePrecision cp = collective_precision(m);
    r.angle = cp.report.angle;
    r.variance = cp.assumed_variance;
    r.delta_xi = cp.report.delta_xi;
    r.delta_xi_exact = cp.delta_xi_exact;
    r.qfi = cp.report.qfi;
  }
  return r;
}

// One coupling branch at finite time, starting from vacuum at t = 0.
struct BranchTransient {
  bool defined = false;  // false while the readout has accumulated no signal
  double delta_xi = 0.0;
  double variance = 0.0;
  double angle = 0.0;
  double qfi = 0.0;
};

inline BranchTransient analyze_transient(const ModelSpec& m, double t) {
  BranchTransient r;
  const LinearSystem sys = build_star(m);
  ModelSpec unit = m;
  unit.xi = 1.0;
  const LinearSystem usys = build_star(unit);
  const int dim = static_cast<int>(sys.drift.rows());
  const Eigen::VectorXcd dmean =
      propagate_mean(usys, Eigen::VectorXcd::Zero(dim), t);
  const QuadratureSystem quad = to_quadrature(sys);
  const Eigen::MatrixXd c0 = 0.5 * Eigen::MatrixXd::Identity(2 * dim, 2 * dim);
  const Eigen::MatrixXd cov = transient_covariance(quad.drift, quad.diffusion, c0, t);
  if (m.n_readout == 1) {
    const cplx db = dmean(1);
    if (std::abs(db) == 0.0) return r;
    const Eigen::Matrix2d cb = cov.block<2, 2>(2, 2);
    r.angle = std::arg(db);
    r.variance = quadrature_variance(cb, r.angle);
    r.delta_xi = std::sqrt(r.variance) / (std::sqrt(2.0) * std::abs(db));
    const Eigen::Vector2d md(std::sqrt(2.0) * db.imag(), std::sqrt(2.0) * db.real());
    r.qfi = gaussian_qfi(md, cb, Eigen::Matrix2d::Zero());
    r.defined = true;
  } else {
    double dq = 0.0;
    for (int j = 1; j <= m.n_readout; ++j) dq += std::sqrt(2.0) * dmean(j).imag();
    if (dq == 0.0) return r;
    double var_q = 0.0;
    for (int j = 1; j <= m.n_readout; ++j)
      for (int k = 1; k <= m.n_readout; ++k) var_q += cov(2 * j, 2 * k);
    r.angle = std::numbers::pi / 2.0;
    r.variance = var_q;
    r.delta_xi = std::sqrt(var_q) / std::abs(dq);
    r.qfi = dq * dq / var_q;
    r.defined = true;
  }
  return r;
}

// Closed-form values for the regimes the formula bank covers; absent fields
// mean the point has no formula (the numeric route still runs there).
struct RowClosedForm {
  std::optional<double> dxi_nr, dxi_r, eta;
};

inline RowClosedForm closed_form_steady(const ModelSpec& m, ThermalReading reading) {
  RowClosedForm cf;
  const bool occupied = m.n_a != 0.0 || m.n_b != 0.0;
  const bool resonant = m.detuning_a == 0.0 && m.detuning_b == 0.0;
  if (m.lambda_eff <= 0.0) return cf;
  if (m.n_readout > 1) {
    if (!occupied && resonant) {
      const ParallelPrecision p = parallel(m.kappa, m.lambda_eff, m.n_readout);
      cf.dxi_nr = p.delta_xi_nr;
      cf.dxi_r = p.delta_xi_r;
      cf.eta = p.eta;
    }
  } else if (occupied) {
    if (resonant) {
      const ThermalPrecision th = thermal(m.kappa, m.lambda_eff, m.n_a, m.n_b, reading);
      cf.dxi_nr = th.delta_xi_nr_sqrt;
      cf.dxi_r = th.delta_xi_r_sqrt;
      cf.eta = th.eta_sqrt;
    }
  } else if (resonant) {
    const PairPrecision p = pair_steady(m.kappa, m.lambda_eff);
    cf.dxi_nr = p.delta_xi_nr;
    cf.dxi_r = p.delta_xi_r;
    cf.eta = p.eta;
  } else if (m.detuning_a == m.detuning_b) {
    const DetunedPrecision d = detuned_equal(m.kappa, m.lambda_eff, m.detuning_a);
    cf.dxi_nr = d.delta_xi_nr;
    cf.dxi_r = d.delta_xi_r;
    cf.eta = d.eta;
  } else if (m.detuning_a == -m.detuning_b) {
    const DetunedPrecision d = detuned_opposite(m.kappa, m.lambda_eff, m.detuning_a);
    cf.dxi_nr = d.delta_xi_nr;
    cf.dxi_r = d.delta_xi_r;
    cf.eta = d.eta;
  }
  return cf;
}

inline RowClosedForm closed_form_transient(const ModelSpec& m, double t) {
  RowClosedForm cf;
  const bool occupied = m.n_a != 0.0 || m.n_b != 0.0;
  const bool resonant = m.detuning_a == 0.0 && m.detuning_b == 0.0;
  if (m.n_readout != 1 || occupied || !resonant || m.lambda_eff <= 0.0 || !(t > 0.0)) return cf;
  const TransientPrecision p = pair_transient(m.kappa, m.lambda_eff, t);
  cf.dxi_nr = p.delta_xi_nr;
  cf.dxi_r = p.delta_xi_r;
  cf.eta = p.eta;
  return cf;
}

namespace detail {

// Worst relative deviation between the numeric and closed-form columns that
// are present in both routes.
inline std::optional<double> route_deviation(std::optional<double> num_nr,
                                             std::optional<double> num_r,
                                             std::optional<double> num_eta,
                                             const RowClosedForm& cf) {
  std::optional<double> worst;
  auto consider = [&](const std::optional<double>& num, const std::optional<double>& ref) {
    if (!num || !ref) return;
    const double dev = std::abs(*num - *ref) / std::max(std::abs(*ref), 1e-300);
    if (!worst || dev > *worst) worst = dev;
  };
  consider(num_nr, cf.dxi_nr);
  consider(num_r, cf.dxi_r);
  consider(num_eta, cf.eta);
  return worst;
}

inline Cell opt_cell(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

}  // namespace detail

inline std::vector<std::string> result_columns() {
  return {"kappa",      "lambda_eff", "n_readout", "delta_a",   "delta_b",
          "n_a",        "n_b",        "t",         "dxi_nr_num", "dxi_r_num",
          "eta_num",    "dxi_nr_cf",  "dxi_r_cf",  "eta_cf",    "improvement",
          "deviation",  "qfi_nr",     "qfi_r",     "angle_nr",  "dxi_nr_exact",
          "dxi_r_exact", "note"};
}

namespace detail {

inline void fill_param_cells(const Table& tbl, std::vector<Cell>& row, const ModelSpec& m) {
  tbl.set(row, "kappa", m.kappa);
  tbl.set(row, "lambda_eff", m.lambda_eff);
  tbl.set(row, "n_readout", static_cast<std::int64_t>(m.n_readout));
  tbl.set(row, "delta_a", m.detuning_a);
  tbl.set(row, "delta_b", m.detuning_b);
  tbl.set(row, "n_a", m.n_a);
  tbl.set(row, "n_b", m.n_b);
}

}  // namespace detail

// Steady-state table over the resolved scenario rows. Unstable branches are
// flagged in the note column and leave their cells empty; the run proceeds.
inline Table run_steady(const Scenario& s) {
  Table tbl;
  tbl.columns = result_columns();
  for (const ModelSpec& base : resolve_rows(s)) {
    ModelSpec nr_spec = base;
    nr_spec.coupling = Nonreciprocal{};
    ModelSpec r_spec = base;
    r_spec.coupling = Reciprocal{};
    const BranchSteady nr = analyze_steady(nr_spec);
    const BranchSteady rb = analyze_steady(r_spec);

    auto& row = tbl.add_row();
    detail::fill_param_cells(tbl, row, base);

    std::optional<double> num_nr, num_r, num_eta;
    if (nr.stable) {
      num_nr = nr.delta_xi;
      tbl.set(row, "dxi_nr_num", nr.delta_xi);
      tbl.set(row, "dxi_nr_exact", nr.delta_xi_exact);
      if (s.with_qfi) tbl.set(row, "qfi_nr", nr.qfi);
      tbl.set(row, "angle_nr", nr.angle);
    }
    if (rb.stable) {
      num_r = rb.delta_xi;
      tbl.set(row, "dxi_r_num", rb.delta_xi);
      tbl.set(row, "dxi_r_exact", rb.delta_xi_exact);
      if (s.with_qfi) tbl.set(row, "qfi_r", rb.qfi);
    }
    if (num_nr && num_r) {
      num_eta = *num_nr / *num_r;
      tbl.set(row, "eta_num", *num_eta);
      tbl.set(row, "improvement", *num_r / *num_nr);
    }

    if (s.with_closed_form) {
      const RowClosedForm cf = closed_form_steady(base, s.thermal_reading);
      tbl.set(row, "dxi_nr_cf", detail::opt_cell(cf.dxi_nr));
      tbl.set(row, "dxi_r_cf", detail::opt_cell(cf.dxi_r));
      tbl.set(row, "eta_cf", detail::opt_cell(cf.eta));
      tbl.set(row, "deviation",
              detail::opt_cell(detail::route_deviation(num_nr, num_r, num_eta, cf)));
    }

    std::string note;
    if (!nr.stable) note = "unstable:one-way";
    if (!rb.stable) note += note.empty() ? "unstable:two-way" : ",two-way";
    tbl.set(row, "note", note);
  }
  return tbl;
}

// Default transient grid: 200 points, linear in lambda_eff * t up to 15.
inline std::vector<double> default_transient_times(const ModelSpec& m) {
  std::vector<double> times;
  const double scale = m.lambda_eff > 0.0 ? m.lambda_eff : 1.0;
  for (int i = 1; i <= 200; ++i) times.push_back(15.0 * i / 200.0 / scale);
  return times;
}

inline Table run_transient(const Scenario& s) {
  Table tbl;
  tbl.columns = result_columns();
  for (const ModelSpec& base : resolve_rows(s)) {
    const std::vector<double> times =
        s.transient ? s.transient->times : default_transient_times(base);
    for (const double t : times) {
      ModelSpec nr_spec = base;
      nr_spec.coupling = Nonreciprocal{};
      ModelSpec r_spec = base;
      r_spec.coupling = Reciprocal{};
      const BranchTransient nr = analyze_transient(nr_spec, t);
      const BranchTransient rb = analyze_transient(r_spec, t);

      auto& row = tbl.add_row();
      detail::fill_param_cells(tbl, row, base);
      tbl.set(row, "t", t);

      std::optional<double> num_nr, num_r, num_eta;
      if (nr.defined) {
        num_nr = nr.delta_xi;
        tbl.set(row, "dxi_nr_num", nr.delta_xi);
        tbl.set(row, "dxi_nr_exact", nr.delta_xi);
        if (s.with_qfi) tbl.set(row, "qfi_nr", nr.qfi);
        tbl.set(row, "angle_nr", nr.angle);
      }
      if (rb.defined) {
        num_r = rb.delta_xi;
        tbl.set(row, "dxi_r_num", rb.delta_xi);
        tbl.set(row, "dxi_r_exact", rb.delta_xi);
        if (s.with_qfi) tbl.set(row, "qfi_r", rb.qfi);
      }
      if (num_nr && num_r) {
        num_eta = *num_nr / *num_r;
        tbl.set(row, "eta_num", *num_eta);
        tbl.set(row, "improvement", *num_r / *num_nr);
      }

      if (s.with_closed_form) {
        const RowClosedForm cf = closed_form_transient(base, t);
        tbl.set(row, "dxi_nr_cf", detail::opt_cell(cf.dxi_nr));
        tbl.set(row, "dxi_r_cf", detail::opt_cell(cf.dxi_r));
        tbl.set(row, "eta_cf", detail::opt_cell(cf.eta));
        tbl.set(row, "deviation",
                detail::opt_cell(detail::route_deviation(num_nr, num_r, num_eta, cf)));
      }

      std::string note;
      if (!nr.defined) note = "no-signal:one-way";
      if (!rb.defined) note += note.empty() ? "no-signal:two-way" : ",two-way";
      tbl.set(row, "note", note);
    }
  }
  return tbl;
}

// Monte Carlo check table: per-quadrature sample statistics against the
// moment-propagation prediction at the same time.
inline Table run_montecarlo(const Scenario& s) {
  const ModelSpec m = s.model;
  const SimConfig cfg = s.monte_carlo.value_or(SimConfig{0.005, 8.0, 20000, 20260814});
  const LinearSystem sys = build_star(m);
  const QuadratureSystem quad = to_quadrature(sys);
  const int dim = static_cast<int>(quad.drift.rows());

  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
  const SampleStats stats = simulate(quad, x0, cfg);

  MomentState init;
  init.time = 0.0;
  init.mean = x0;
  init.covariance = 0.5 * Eigen::MatrixXd::Identity(dim, dim);
  const MomentState pred = transient_state(quad, init, stats.time);

  Table tbl;
  tbl.columns = {"component", "mc_mean", "mc_se",  "pred_mean", "z_score", "mc_var",
                 "pred_var",  "var_ratio", "n_traj", "t_end",    "dt",      "seed"};
  auto label = [&](int idx) {
    const int mode = idx / 2;
    const std::string quad_name = (idx % 2 == 0) ? "q_" : "p_";
    if (mode == 0) return quad_name + "a";
    if (m.n_readout == 1) return quad_name + "b";
    return quad_name + "b" + std::to_string(mode);
  };
  for (int i = 0; i < dim; ++i) {
    auto& row = tbl.add_row();
    tbl.set(row, "component", label(i));
    tbl.set(row, "mc_mean", stats.mean(i));
    tbl.set(row, "mc_se", stats.mean_se(i));
    tbl.set(row, "pred_mean", pred.mean(i));
    const double se = stats.mean_se(i);
    tbl.set(row, "z_score", se > 0.0 ? (stats.mean(i) - pred.mean(i)) / se : 0.0);
    tbl.set(row, "mc_var", stats.covariance(i, i));
    tbl.set(row, "pred_var", pred.covariance(i, i));
    tbl.set(row, "var_ratio", stats.covariance(i, i) / pred.covariance(i, i));
    tbl.set(row, "n_traj", stats.n_traj);
    tbl.set(row, "t_end", stats.time);
    tbl.set(row, "dt", cfg.dt);
    tbl.set(row, "seed", static_cast<std::int64_t>(cfg.seed));
  }
  return tbl;
}

// Transient-advantage figure: precision ratio against lambda_eff * t for a
// weakly, critically and strongly damped readout, rendered from the formula
// bank (the numeric cross-check lives in the verification suite).
inline Table run_fig2() {
  const double lambda_eff = 10.0 / std::sqrt(2.0);
  const std::vector<double> kappas = {0.1, 1.0, 1000.0};
  Table tbl;
  tbl.columns = {"kappa", "lambda_eff", "t",     "lambda_t",  "dxi_nr_t",
                 "dxi_r_t", "eta_t",    "eta_steady"};
  for (const double kappa : kappas) {
    const double eta_inf = pair_eta(kappa, lambda_eff);
    for (int i = 1; i <= 360; ++i) {
      const double lt = 0.05 * i;
      const double t = lt / lambda_eff;
      const TransientPrecision p = pair_transient(kappa, lambda_eff, t);
      auto& row = tbl.add_row();
      tbl.set(row, "kappa", kappa);
      tbl.set(row, "lambda_eff", lambda_eff);
      tbl.set(row, "t", t);
      tbl.set(row, "lambda_t", lt);
      tbl.set(row, "dxi_nr_t", detail::opt_cell(p.delta_xi_nr));
      tbl.set(row, "dxi_r_t", detail::opt_cell(p.delta_xi_r));
      tbl.set(row, "eta_t", detail::opt_cell(p.eta));
      tbl.set(row, "eta_steady", eta_inf);
    }
  }
  return tbl;
}

}  // namespace nrsense
