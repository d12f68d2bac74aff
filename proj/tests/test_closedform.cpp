#include <nrsense/closedform.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace nrsense;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("matched-rate steady pair") {
  const PairPrecision p = pair_steady(1.0, 1.0);
  CHECK_THAT(p.delta_xi_nr, WithinRel(1.0, 1e-15));
  CHECK_THAT(p.delta_xi_r, WithinRel(1.0, 1e-15));
  CHECK_THAT(p.eta, WithinRel(1.0, 1e-15));
  CHECK_THAT(p.improvement, WithinRel(1.0, 1e-15));
}

TEST_CASE("steady pair at 2:1 rates") {
  const PairPrecision p = pair_steady(2.0, 1.0);
  CHECK_THAT(p.delta_xi_nr, WithinRel(2.25, 1e-15));
  CHECK_THAT(p.delta_xi_r, WithinRel(2.5, 1e-15));
  CHECK_THAT(p.eta, WithinRel(0.9, 1e-15));
  CHECK_THAT(p.improvement, WithinRel(1.0 / 0.9, 1e-15));
}

TEST_CASE("precision ratio stays in [1/2, 1] and is symmetric in the rates") {
  std::mt19937 gen(2026);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double k = std::pow(10.0, u(gen));
    const double lam = std::pow(10.0, u(gen));
    const double eta = pair_eta(k, lam);
    CHECK(eta <= 1.0 + 1e-15);
    CHECK(eta >= 0.5 - 1e-15);
    CHECK_THAT(pair_eta(lam, k), WithinRel(eta, 1e-15));
  }
  for (double r : {1e-3, 0.37, 1.0, 8.0, 1e3})
    CHECK_THAT(pair_eta(r, r), WithinAbs(1.0, 1e-15));
  CHECK_THAT(pair_eta(0.0, 1.0), WithinRel(0.5, 1e-15));  // lossless sensor limit
}

TEST_CASE("rate guards reject degenerate inputs") {
  CHECK_THROWS_AS(pair_steady(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(pair_steady(-0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(pair_eta(std::numeric_limits<double>::infinity(), 1.0), std::domain_error);
  CHECK_THROWS_AS(pair_transient(1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(pair_transient(1.0, 1.0, -2.0), std::domain_error);
  CHECK_THROWS_AS(parallel(1.0, 1.0, 0), std::domain_error);
  CHECK_THROWS_AS(detuned_equal(1.0, 1.0, std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
  CHECK_THROWS_AS(thermal(1.0, 1.0, -0.1, 0.0), std::domain_error);
}

TEST_CASE("transient pair at unit rates and unit time") {
  const TransientPrecision p = pair_transient(1.0, 1.0, 1.0);
  REQUIRE(p.delta_xi_nr);
  REQUIRE(p.delta_xi_r);
  REQUIRE(p.eta);
  CHECK_THAT(*p.delta_xi_nr, WithinRel(1.6835182627834082, 1e-13));
  CHECK_THAT(*p.delta_xi_r, WithinRel(2.033867911512269, 1e-13));
  CHECK_THAT(*p.eta, WithinRel(0.8277421819058246, 1e-13));
}

TEST_CASE("transient precision is reported absent before any signal builds") {
  // At t ~ 1e-9 both build factors round to zero in double precision.
  const TransientPrecision p = pair_transient(1.0, 1.0, 1e-9);
  CHECK_FALSE(p.delta_xi_nr);
  CHECK_FALSE(p.delta_xi_r);
  CHECK_FALSE(p.eta);
}

TEST_CASE("transient pair relaxes to the steady values") {
  const double k = 0.6, lam = 1.7;
  const TransientPrecision late = pair_transient(k, lam, 80.0);
  const PairPrecision ss = pair_steady(k, lam);
  REQUIRE(late.eta);
  CHECK_THAT(*late.delta_xi_nr, WithinRel(ss.delta_xi_nr, 1e-12));
  CHECK_THAT(*late.delta_xi_r, WithinRel(ss.delta_xi_r, 1e-12));
  CHECK_THAT(*late.eta, WithinRel(ss.eta, 1e-12));
}

TEST_CASE("parallel readout at N = 1 is the plain pair") {
  for (auto [k, lam] : {std::pair{1.0, 1.0}, {0.3, 2.0}, {5.0, 0.4}}) {
    const ParallelPrecision n1 = parallel(k, lam, 1);
    const PairPrecision p = pair_steady(k, lam);
    CHECK_THAT(n1.delta_xi_nr, WithinRel(p.delta_xi_nr, 1e-15));
    CHECK_THAT(n1.delta_xi_r, WithinRel(p.delta_xi_r, 1e-15));
    CHECK_THAT(n1.eta, WithinRel(p.eta, 1e-15));
  }
}

TEST_CASE("parallel readout limit fields and regime behavior") {
  const ParallelPrecision p5 = parallel(1.0, 1.0, 5);
  CHECK_THAT(p5.eta_strong_coupling, WithinRel(0.04, 1e-15));
  CHECK_THAT(p5.eta_matched_rate, WithinRel(10.0 / 126.0, 1e-15));
  CHECK_THAT(p5.eta_weak_coupling, WithinRel(5.0 / 6.0, 1e-15));
  CHECK_THAT(p5.eta, WithinRel(p5.eta_matched_rate, 1e-14));  // kappa = lambda_eff

  // kappa -> 0 sends eta to 1/(N (N+1)), which the 1/N^2 field abbreviates at
  // large N; kappa -> infinity sends it to N/(N+1) exactly.
  const ParallelPrecision strong = parallel(1e-7, 1.0, 4);
  CHECK_THAT(strong.eta, WithinRel(1.0 / 20.0, 1e-6));
  CHECK_THAT(parallel(1e-7, 1.0, 200).eta * 200.0 * 201.0, WithinRel(1.0, 1e-5));
  const ParallelPrecision weak = parallel(1e7, 1.0, 4);
  CHECK_THAT(weak.eta, WithinRel(0.8, 1e-6));
  // More readout modes always help the one-way branch at fixed rates.
  CHECK(parallel(1.0, 1.0, 8).delta_xi_nr < parallel(1.0, 1.0, 4).delta_xi_nr);
}

TEST_CASE("detuned formulas collapse to the resonant pair at zero detuning") {
  const PairPrecision p = pair_steady(0.7, 1.9);
  const DetunedPrecision eq = detuned_equal(0.7, 1.9, 0.0);
  const DetunedPrecision op = detuned_opposite(0.7, 1.9, 0.0);
  CHECK_THAT(eq.delta_xi_nr, WithinRel(p.delta_xi_nr, 1e-15));
  CHECK_THAT(eq.delta_xi_r, WithinRel(p.delta_xi_r, 1e-14));
  CHECK_THAT(op.delta_xi_nr, WithinRel(p.delta_xi_nr, 1e-15));
  CHECK_THAT(op.delta_xi_r, WithinRel(p.delta_xi_r, 1e-15));
}

TEST_CASE("equal detuning can push the ratio far above 1") {
  // Near the two-way lobe resonance the one-way advantage inverts hard.
  const DetunedPrecision d = detuned_equal(0.01, 1.0, 1.0);
  CHECK_THAT(d.eta, WithinRel(50.50186873058628, 1e-13));
  CHECK(d.eta > 1.0);
}

TEST_CASE("opposite detuning broadens both branches the same way") {
  for (double dp : {0.3, 0.7, 2.0}) {
    const DetunedPrecision d = detuned_opposite(1.0, 2.0, dp);
    const DetunedPrecision dneg = detuned_opposite(1.0, 2.0, -dp);
    CHECK_THAT(d.eta, WithinRel(dneg.eta, 1e-15));
    CHECK(d.eta <= 1.0 + 1e-15);
  }
}

TEST_CASE("thermal factors reduce to vacuum at zero occupation") {
  const ThermalPrecision t0 = thermal(1.3, 0.8, 0.0, 0.0);
  const PairPrecision p = pair_steady(1.3, 0.8);
  CHECK_THAT(t0.bracket_nr, WithinRel(1.0, 1e-15));
  CHECK_THAT(t0.bracket_r, WithinRel(1.0, 1e-15));
  CHECK_THAT(t0.delta_xi_nr, WithinRel(p.delta_xi_nr, 1e-15));
  CHECK_THAT(t0.delta_xi_r, WithinRel(p.delta_xi_r, 1e-15));
  CHECK_THAT(t0.eta, WithinRel(p.eta, 1e-15));
  CHECK_THAT(t0.eta_sqrt, WithinRel(p.eta, 1e-14));
  // The two printed-rate readings only differ once occupation enters.
  const ThermalPrecision m0 = thermal(1.3, 0.8, 0.0, 0.0, ThermalReading::master_rate);
  CHECK_THAT(m0.delta_xi_nr, WithinRel(t0.delta_xi_nr, 1e-15));
  const ThermalPrecision t1 = thermal(1.3, 0.8, 0.4, 0.4);
  const ThermalPrecision m1 = thermal(1.3, 0.8, 0.4, 0.4, ThermalReading::master_rate);
  CHECK(std::abs(t1.bracket_nr - m1.bracket_nr) > 1e-3);
}

TEST_CASE("thermal excess brackets at matched unit rates") {
  const ThermalPrecision t = thermal(1.0, 1.0, 0.01, 0.01);
  CHECK_THAT(t.bracket_nr, WithinRel(1.015, 1e-14));
  CHECK_THAT(t.bracket_r, WithinRel(1.02, 1e-14));
  CHECK_THAT(t.mu, WithinRel(1.015 / 1.02, 1e-13));
  CHECK_THAT(t.delta_xi_nr_sqrt, WithinRel(std::sqrt(1.015), 1e-13));
  CHECK(t.eta_sqrt < 1.0);
}

TEST_CASE("matched-rate thermal degradation identity") {
  for (double n : {0.0, 0.1, 0.3, 1.0, 10.0, 100.0}) {
    for (double k : {0.3, 1.0, 7.0}) {
      const ThermalPrecision t = thermal(k, k, n, n);
      CHECK_THAT(t.mu, WithinRel(thermal_equal_rate_eta(n), 1e-13));
      CHECK_THAT(t.eta, WithinRel(thermal_equal_rate_eta(n), 1e-13));
    }
  }
  CHECK_THAT(thermal_equal_rate_eta(0.3), WithinRel(0.90625, 1e-15));
  CHECK_THAT(thermal_equal_rate_eta(0.0), WithinRel(1.0, 1e-15));
  CHECK(thermal_equal_rate_eta(1e12) > 0.75);  // floor at 3/4
  CHECK_THROWS_AS(thermal_equal_rate_eta(-0.1), std::domain_error);
}

TEST_CASE("thermal occupation from temperature") {
  CHECK(bose_n(1.0, 0.0) == 0.0);
  CHECK_THAT(bose_n(1.0, 1.0), WithinRel(0.5819767068693265, 1e-14));
  CHECK_THAT(bose_n(1.0, 100.0), WithinRel(99.50083333194443, 1e-12));
  CHECK_THROWS_AS(bose_n(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(bose_n(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(bose_n(1.0, -1.0), std::domain_error);
}
