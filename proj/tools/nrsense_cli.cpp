// nrsense: command line front end for the precision comparison library.
// Subcommands: steady, sweep, transient, fig2, montecarlo, verify.
// Exit codes: 0 success, 1 verification failure, 2 invalid input or setup.

#include <nrsense/nrsense.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
  std::string config;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  double tol = 0.0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "scenario file (JSON)");
  cmd->add_option("--out", o.out, "output path; stdout when omitted");
  cmd->add_option("--format", o.format, "csv, json or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  o.seed_opt = cmd->add_option("--seed", o.seed, "sampling seed override");
  o.tol_opt = cmd->add_option("--tol", o.tol, "agreement tolerance")
                  ->check(CLI::PositiveNumber);
}

nrsense::Scenario make_scenario(const CommonOpts& o) {
  nrsense::Scenario s =
      o.config.empty() ? nrsense::Scenario{} : nrsense::load_scenario(o.config);
  if (!o.out.empty()) s.out_path = o.out;
  if (!o.format.empty()) s.format = o.format;
  if (o.seed_opt && o.seed_opt->count() > 0) {
    if (!s.monte_carlo) s.monte_carlo = nrsense::SimConfig{};
    s.monte_carlo->seed = o.seed;
  }
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file " + path);
  f << text;
}

std::string render_table(const nrsense::Table& t, const std::string& fmt) {
  if (fmt == "csv") return nrsense::to_csv(t);
  if (fmt == "json") return nrsense::to_json(t).dump(2) + "\n";
  throw std::invalid_argument("format " + fmt + " is not available for this table");
}

// Column pair -> polyline, skipping rows where either cell is empty.
nrsense::SvgSeries table_series(const nrsense::Table& t, const std::string& xcol,
                                const std::string& ycol, const std::string& label,
                                const std::string& color) {
  nrsense::SvgSeries s;
  s.label = label;
  s.color = color;
  const int xi = t.column_index(xcol);
  const int yi = t.column_index(ycol);
  for (const auto& row : t.rows) {
    const double* x = std::get_if<double>(&row[xi]);
    const double* y = std::get_if<double>(&row[yi]);
    if (!x || !y) continue;
    s.x.push_back(*x);
    s.y.push_back(*y);
  }
  return s;
}

std::string render_ratio_chart(const nrsense::Table& t, const std::string& xcol, bool log_x,
                               const std::string& title) {
  nrsense::SvgChart chart;
  chart.title = title;
  chart.x_label = xcol;
  chart.y_label = "precision ratio";
  chart.log_x = log_x;
  chart.series.push_back(table_series(t, xcol, "eta_num", "numeric", "#1f77b4"));
  if (!table_series(t, xcol, "eta_cf", "", "").x.empty())
    chart.series.push_back(table_series(t, xcol, "eta_cf", "closed form", "#d62728"));
  if (chart.series[0].x.empty() && (chart.series.size() < 2 || chart.series[1].x.empty()))
    throw std::invalid_argument("svg output needs ratio values over a swept axis");
  return nrsense::to_svg(chart);
}

void annotate_deviation(nrsense::Table& t, double tol) {
  const int dev = t.column_index("deviation");
  const int note = t.column_index("note");
  for (auto& row : t.rows) {
    const double* d = std::get_if<double>(&row[dev]);
    if (!d || !(*d > tol)) continue;
    auto* s = std::get_if<std::string>(&row[note]);
    const std::string tag = "deviation-above-tol";
    row[note] = (s && !s->empty()) ? *s + "," + tag : tag;
  }
}

int emit_rows(nrsense::Table t, const nrsense::Scenario& s, const CommonOpts& o,
              const std::string& xcol, bool log_x, const std::string& title) {
  if (o.tol_opt && o.tol_opt->count() > 0) annotate_deviation(t, o.tol);
  if (s.format == "svg")
    write_text(s.out_path, render_ratio_chart(t, xcol, log_x, title));
  else
    write_text(s.out_path, render_table(t, s.format));
  return 0;
}

int run_steady_cmd(const CommonOpts& o) {
  const nrsense::Scenario s = make_scenario(o);
  const std::string xcol = s.axes.empty() ? "kappa" : s.axes.front().param;
  return emit_rows(nrsense::run_steady(s), s, o, xcol, false, "steady-state precision");
}

int run_sweep_cmd(const CommonOpts& o) {
  nrsense::Scenario s = make_scenario(o);
  if (s.axes.empty()) {
    nrsense::SweepAxis axis;
    axis.param = "kappa";
    for (int i = 0; i < 25; ++i)
      axis.values.push_back(std::pow(10.0, -2.0 + 4.0 * i / 24.0));
    s.axes.push_back(std::move(axis));
  }
  const bool log_x = s.axes.front().param == "kappa" || s.axes.front().param == "lambda_eff";
  return emit_rows(nrsense::run_steady(s), s, o, s.axes.front().param, log_x,
                   "steady-state precision sweep");
}

int run_transient_cmd(const CommonOpts& o) {
  const nrsense::Scenario s = make_scenario(o);
  return emit_rows(nrsense::run_transient(s), s, o, "t", false, "finite-time precision");
}

int run_fig2_cmd(const CommonOpts& o) {
  nrsense::Scenario s = make_scenario(o);
  const nrsense::Table t = nrsense::run_fig2();
  if (s.format == "svg") {
    nrsense::SvgChart chart;
    chart.title = "transient precision ratio, lambda_eff = 10/sqrt(2)";
    chart.x_label = "lambda_eff * t";
    chart.y_label = "precision ratio";
    const char* colors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
    const double kappas[3] = {0.1, 1.0, 1000.0};
    for (int k = 0; k < 3; ++k) {
      nrsense::SvgSeries transient_s, steady_s;
      transient_s.label = "kappa=" + nrsense::format_double(kappas[k]);
      transient_s.color = colors[k];
      steady_s.color = "#bbbbbb";
      const int ki = t.column_index("kappa");
      const int xi = t.column_index("lambda_t");
      const int yi = t.column_index("eta_t");
      const int si = t.column_index("eta_steady");
      for (const auto& row : t.rows) {
        if (std::get<double>(row[ki]) != kappas[k]) continue;
        const double* y = std::get_if<double>(&row[yi]);
        if (!y) continue;
        transient_s.x.push_back(std::get<double>(row[xi]));
        transient_s.y.push_back(*y);
        steady_s.x.push_back(std::get<double>(row[xi]));
        steady_s.y.push_back(std::get<double>(row[si]));
      }
      chart.series.push_back(std::move(transient_s));
      chart.series.push_back(std::move(steady_s));
    }
    write_text(s.out_path, nrsense::to_svg(chart));
    return 0;
  }
  write_text(s.out_path, render_table(t, s.format));
  return 0;
}

int run_montecarlo_cmd(const CommonOpts& o) {
  const nrsense::Scenario s = make_scenario(o);
  if (s.format == "svg")
    throw std::invalid_argument("montecarlo reports tables only (csv or json)");
  write_text(s.out_path, render_table(nrsense::run_montecarlo(s), s.format));
  return 0;
}

int run_verify_cmd(const CommonOpts& o, bool skip_mc, std::int64_t mc_traj) {
  nrsense::VerifyOptions opt;
  if (o.tol_opt && o.tol_opt->count() > 0) opt.grid_tol = o.tol;
  if (o.seed_opt && o.seed_opt->count() > 0) opt.seed = o.seed;
  opt.with_monte_carlo = !skip_mc;
  opt.mc_traj = mc_traj;

  const std::vector<nrsense::CheckResult> checks = nrsense::run_verify(opt);
  int n_gating = 0, n_passed = 0;
  for (const auto& r : checks) {
    if (!r.gating) {
      std::cout << "[info] " << r.criterion << " " << nrsense::criterion_title(r.criterion)
                << " :: " << r.name << " (measured " << nrsense::format_double(r.worst) << "; "
                << r.detail << ")\n";
      continue;
    }
    ++n_gating;
    if (r.passed) ++n_passed;
    std::cout << (r.passed ? "[pass] " : "[FAIL] ") << r.criterion << " "
              << nrsense::criterion_title(r.criterion) << " :: " << r.name << " (worst "
              << nrsense::format_double(r.worst) << ", tol "
              << nrsense::format_double(r.tolerance) << "; " << r.detail << ")\n";
  }
  std::cout << "verification: " << n_passed << "/" << n_gating << " gating checks passed\n";

  if (!o.out.empty()) {
    const std::string fmt = o.format.empty() ? "csv" : o.format;
    if (fmt == "svg") throw std::invalid_argument("verify reports tables only (csv or json)");
    write_text(o.out, render_table(nrsense::verify_table(checks), fmt));
  }
  return n_passed == n_gating ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"precision comparison for one-way vs two-way coupled sensing pairs"};
  app.require_subcommand(1);

  CommonOpts steady_o, sweep_o, transient_o, fig2_o, mc_o, verify_o;
  bool skip_mc = false;
  std::int64_t mc_traj = 20000;

  add_common(app.add_subcommand("steady", "steady-state precision at one parameter point"),
             steady_o);
  add_common(app.add_subcommand("sweep", "steady-state precision over swept parameters"),
             sweep_o);
  add_common(app.add_subcommand("transient", "finite-time precision on a time grid"),
             transient_o);
  add_common(app.add_subcommand("fig2", "transient ratio preset for three damping regimes"),
             fig2_o);
  add_common(app.add_subcommand("montecarlo", "trajectory sampling against moment propagation"),
             mc_o);
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the full verification suite");
  add_common(verify_cmd, verify_o);
  verify_cmd->add_flag("--no-mc", skip_mc, "skip the trajectory calibration checks");
  verify_cmd->add_option("--mc-traj", mc_traj, "trajectories for the calibration checks")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("steady")) return run_steady_cmd(steady_o);
    if (app.got_subcommand("sweep")) return run_sweep_cmd(sweep_o);
    if (app.got_subcommand("transient")) return run_transient_cmd(transient_o);
    if (app.got_subcommand("fig2")) return run_fig2_cmd(fig2_o);
    if (app.got_subcommand("montecarlo")) return run_montecarlo_cmd(mc_o);
    if (app.got_subcommand("verify")) return run_verify_cmd(verify_o, skip_mc, mc_traj);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
