#pragma once
// scenario.hpp: run configuration. A scenario is one JSON document holding a
// base model, optional sweep axes (cartesian product, deterministic order),
// the analyses to run, and output preferences. CLI flags override file values.

#include <nrsense/closedform.hpp>
#include <nrsense/model.hpp>
#include <nrsense/trajectory.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nrsense {

struct SweepAxis {
  std::string param;
  std::vector<double> values;
};

struct TransientGrid {
  std::vector<double> times;
};

struct Scenario {
  ModelSpec model;
  std::vector<SweepAxis> axes;
  bool with_closed_form = true;
  bool with_qfi = true;
  std::optional<TransientGrid> transient;
  std::optional<SimConfig> monte_carlo;
  ThermalReading thermal_reading = ThermalReading::cross_damping;
  std::string out_path;       // empty: stdout
  std::string format = "csv"; // csv | json | svg
};

namespace detail {

inline std::vector<double> parse_grid(const nlohmann::json& j, const char* who) {
  std::vector<double> out;
  if (j.is_array()) {  // plain list of values
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
  }
  if (j.is_object() && j.contains("linear")) {
    const auto spec = j.at("linear");
    const double lo = spec.at(0).get<double>(), hi = spec.at(1).get<double>();
    const int n = spec.at(2).get<int>();
    if (n < 1) throw std::invalid_argument(std::string(who) + ": grid count must be >= 1");
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? lo : lo + (hi - lo) * i / double(n - 1));
    return out;
  }
  if (j.is_object() && j.contains("log")) {
    const auto spec = j.at("log");
    const double lo = spec.at(0).get<double>(), hi = spec.at(1).get<double>();
    const int n = spec.at(2).get<int>();
    if (!(lo > 0.0) || !(hi > 0.0))
      throw std::invalid_argument(std::string(who) + ": log grid needs positive bounds");
    if (n < 1) throw std::invalid_argument(std::string(who) + ": grid count must be >= 1");
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? lo
                           : std::exp(std::log(lo) +
                                      (std::log(hi) - std::log(lo)) * i / double(n - 1)));
    return out;
  }
  throw std::invalid_argument(std::string(who) +
                              ": expected a value list or {linear|log: [lo, hi, count]}");
}

}  // namespace detail

inline Coupling parse_coupling(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nonreciprocal") return Nonreciprocal{};
    if (s == "reciprocal") return Reciprocal{};
    throw std::invalid_argument("scenario: unknown coupling '" + s + "'");
  }
  if (j.is_object() && j.contains("custom")) {
    const auto& c = j.at("custom");
    return CustomJ{cplx(c.at(0).get<double>(), c.at(1).get<double>())};
  }
  throw std::invalid_argument("scenario: coupling must be a name or {custom: [re, im]}");
}

inline ModelSpec parse_model(const nlohmann::json& j) {
  ModelSpec m;
  if (j.contains("n_readout")) m.n_readout = j.at("n_readout").get<int>();
  if (j.contains("kappa")) m.kappa = j.at("kappa").get<double>();
  if (j.contains("lambda_eff")) m.lambda_eff = j.at("lambda_eff").get<double>();
  if (j.contains("xi")) m.xi = j.at("xi").get<double>();
  if (j.contains("detuning_a")) m.detuning_a = j.at("detuning_a").get<double>();
  if (j.contains("detuning_b")) m.detuning_b = j.at("detuning_b").get<double>();
  if (j.contains("n_a")) m.n_a = j.at("n_a").get<double>();
  if (j.contains("n_b")) m.n_b = j.at("n_b").get<double>();
  if (j.contains("coupling")) m.coupling = parse_coupling(j.at("coupling"));
  if (j.contains("convention")) {
    const std::string s = j.at("convention").get<std::string>();
    if (s == "lumped")
      m.convention = StarConvention::lumped;
    else if (s == "per_bath")
      m.convention = StarConvention::per_bath;
    else
      throw std::invalid_argument("scenario: unknown convention '" + s + "'");
  }
  // Temperature route: resolve local bath occupations through bose_n.
  if (j.contains("omega")) {
    const double omega = j.at("omega").get<double>();
    if (j.contains("T_a")) m.n_a = bose_n(omega, j.at("T_a").get<double>());
    if (j.contains("T_b")) m.n_b = bose_n(omega, j.at("T_b").get<double>());
  }
  validate(m, "scenario");
  return m;
}

inline Scenario parse_scenario(const nlohmann::json& j) {
  Scenario s;
  if (j.contains("model")) s.model = parse_model(j.at("model"));
  if (j.contains("sweep")) {
    for (const auto& axis : j.at("sweep")) {
      SweepAxis a;
      a.param = axis.at("param").get<std::string>();
      a.values = detail::parse_grid(axis.contains("values") ? axis.at("values") : axis,
                                    "scenario sweep");
      if (a.values.empty()) throw std::invalid_argument("scenario: empty sweep axis");
      s.axes.push_back(std::move(a));
    }
  }
  if (j.contains("analyses")) {
    const auto& an = j.at("analyses");
    if (an.contains("closed_form")) s.with_closed_form = an.at("closed_form").get<bool>();
    if (an.contains("qfi")) s.with_qfi = an.at("qfi").get<bool>();
    if (an.contains("transient"))
      s.transient = TransientGrid{detail::parse_grid(an.at("transient"), "scenario transient")};
    if (an.contains("monte_carlo")) {
      const auto& mc = an.at("monte_carlo");
      SimConfig cfg;
      if (mc.contains("dt")) cfg.dt = mc.at("dt").get<double>();
      if (mc.contains("t_end")) cfg.t_end = mc.at("t_end").get<double>();
      if (mc.contains("n_traj")) cfg.n_traj = mc.at("n_traj").get<std::int64_t>();
      if (mc.contains("seed")) cfg.seed = mc.at("seed").get<std::uint64_t>();
      s.monte_carlo = cfg;
    }
  }
  if (j.contains("thermal_reading")) {
    const std::string r = j.at("thermal_reading").get<std::string>();
    if (r == "cross_damping")
      s.thermal_reading = ThermalReading::cross_damping;
    else if (r == "master_rate")
      s.thermal_reading = ThermalReading::master_rate;
    else
      throw std::invalid_argument("scenario: unknown thermal_reading '" + r + "'");
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.contains("path")) s.out_path = o.at("path").get<std::string>();
    if (o.contains("format")) s.format = o.at("format").get<std::string>();
  }
  if (s.format != "csv" && s.format != "json" && s.format != "svg")
    throw std::invalid_argument("scenario: format must be csv, json or svg");
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario: cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("scenario: " + path + " is not valid JSON: " + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("scenario: bad config shape: " + std::string(e.what()));
  }
}

// Applies one sweep value to a model. Parameter names are the ModelSpec
// field names plus the shorthands delta (both detunings), delta_prime
// (opposite detunings) and n (both occupations).
inline void apply_param(ModelSpec& m, const std::string& param, double value) {
  if (param == "kappa") m.kappa = value;
  else if (param == "lambda_eff") m.lambda_eff = value;
  else if (param == "xi") m.xi = value;
  else if (param == "detuning_a") m.detuning_a = value;
  else if (param == "detuning_b") m.detuning_b = value;
  else if (param == "delta") m.detuning_a = m.detuning_b = value;
  else if (param == "delta_prime") { m.detuning_a = value; m.detuning_b = -value; }
  else if (param == "n_a") m.n_a = value;
  else if (param == "n_b") m.n_b = value;
  else if (param == "n") m.n_a = m.n_b = value;
  else if (param == "n_readout") {
    if (value != std::floor(value) || value < 1.0)
      throw std::invalid_argument("scenario: n_readout sweep values must be integers >= 1");
    m.n_readout = static_cast<int>(value);
  } else {
    throw std::invalid_argument("scenario: unknown sweep parameter '" + param + "'");
  }
}

// Cartesian product of the sweep axes, last axis fastest, base model first
// when no axes are given. Deterministic ordering by construction.
inline std::vector<ModelSpec> resolve_rows(const Scenario& s) {
  std::vector<ModelSpec> rows;
  if (s.axes.empty()) {
    rows.push_back(s.model);
    return rows;
  }
  std::vector<std::size_t> idx(s.axes.size(), 0);
  while (true) {
    ModelSpec m = s.model;
    for (std::size_t a = 0; a < s.axes.size(); ++a)
      apply_param(m, s.axes[a].param, s.axes[a].values[idx[a]]);
    validate(m, "scenario row");
    rows.push_back(m);
    std::size_t a = s.axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < s.axes[a].values.size()) break;
      idx[a] = 0;
      if (a == 0) return rows;
    }
  }
}

}  // namespace nrsense
