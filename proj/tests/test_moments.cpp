#include <nrsense/model.hpp>
#include <nrsense/moments.hpp>
#include <nrsense/oracle.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace nrsense;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Hand-integrated one-way pair means from vacuum:
//   a(t) = -i (xi/g) (1 - e^{-gt})
//   b(t) = +2i lam (xi/g) ((1 - e^{-gt})/g - t e^{-gt}),   g = kappa + lam.
cplx pair_a(double kappa, double lam, double xi, double t) {
  const double g = kappa + lam;
  return cplx(0.0, -xi / g) * (1.0 - std::exp(-g * t));
}

cplx pair_b(double kappa, double lam, double xi, double t) {
  const double g = kappa + lam;
  return cplx(0.0, 2.0 * lam * xi / g) * ((1.0 - std::exp(-g * t)) / g - t * std::exp(-g * t));
}

Eigen::MatrixXd random_stable_drift(unsigned seed, int n) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(gen);
  const double margin = stability_margin(Eigen::MatrixXcd(a.cast<cplx>()));
  a -= (margin + 0.5) * Eigen::MatrixXd::Identity(n, n);
  return a;
}

Eigen::MatrixXd random_psd(unsigned seed, int n) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = u(gen);
  return r * r.transpose();
}

}  // namespace

TEST_CASE("mean propagation matches the hand-integrated one-way pair") {
  ModelSpec m;
  m.kappa = 1.1;
  m.lambda_eff = 0.6;
  m.xi = 0.9;
  const LinearSystem sys = build_pair(m);
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  const double t = 0.7;
  const Eigen::VectorXcd x = propagate_mean(sys, zero, t);
  // Pinned values of the closed integrals at these rates.
  CHECK_THAT(x(0).imag(), WithinRel(-0.3683534484352743, 1e-12));
  CHECK_THAT(x(0).real(), WithinAbs(0.0, 1e-14));
  CHECK_THAT(x(1).imag(), WithinRel(0.12472521322817695, 1e-12));
  CHECK_THAT(x(1).real(), WithinAbs(0.0, 1e-14));
  CHECK(std::abs(x(0) - pair_a(m.kappa, m.lambda_eff, m.xi, t)) < 1e-14);
  CHECK(std::abs(x(1) - pair_b(m.kappa, m.lambda_eff, m.xi, t)) < 1e-14);
}

TEST_CASE("mean propagation endpoints and guards") {
  ModelSpec m;
  const LinearSystem sys = build_pair(m);
  Eigen::VectorXcd x0(2);
  x0 << cplx(0.2, -0.4), cplx(1.0, 0.3);
  CHECK((propagate_mean(sys, x0, 0.0) - x0).norm() < 1e-15);
  CHECK_THROWS_AS(propagate_mean(sys, x0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(propagate_mean(sys, Eigen::VectorXcd::Zero(3), 1.0), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(propagate_mean(sys, x0, nan), std::invalid_argument);
}

TEST_CASE("long-time mean propagation converges to the steady solve") {
  ModelSpec m;
  m.kappa = 0.8;
  m.lambda_eff = 1.4;
  m.xi = 1.2;
  m.detuning_a = 0.5;
  const LinearSystem sys = build_pair(m);
  const Eigen::VectorXcd ss = steady_mean(sys);
  const Eigen::VectorXcd xt = propagate_mean(sys, Eigen::VectorXcd::Zero(2), 40.0);
  CHECK((xt - ss).norm() < 1e-12);
  // kappa = lam = xi = 1: a_ss = -i/2, b_ss = +i/2.
  const Eigen::VectorXcd unit = steady_mean(build_pair(ModelSpec{}));
  CHECK(std::abs(unit(0) - cplx(0.0, -0.5)) < 1e-14);
  CHECK(std::abs(unit(1) - cplx(0.0, 0.5)) < 1e-14);
}

TEST_CASE("steady solvers refuse marginal drifts") {
  ModelSpec m;
  m.kappa = 0.0;
  m.coupling = Reciprocal{};  // purely oscillatory, margin 0
  const LinearSystem sys = build_pair(m);
  CHECK_THROWS_AS(steady_mean(sys), std::domain_error);
  const QuadratureSystem quad = to_quadrature(sys);
  CHECK_THROWS_AS(steady_covariance(quad), std::domain_error);
}

TEST_CASE("steady covariance reproduces the exact thermal pair moments") {
  ModelSpec m;
  m.kappa = 1.3;
  m.lambda_eff = 0.7;
  m.n_a = 0.8;
  m.n_b = 0.25;

  // One-way: <db+db> = 2 kappa lam^2 n_a/g^3 + kappa n_b/g, var = that + 1/2.
  const Eigen::MatrixXd c_nr = steady_covariance(to_quadrature(build_pair(m)));
  CHECK_THAT(c_nr(0, 0), WithinRel(1.02, 1e-12));
  CHECK_THAT(c_nr(1, 1), WithinRel(1.02, 1e-12));
  CHECK_THAT(c_nr(2, 2), WithinRel(0.7899, 1e-12));
  CHECK_THAT(c_nr(3, 3), WithinRel(0.7899, 1e-12));
  // <db^2> = 0: each mode's covariance block is isotropic and diagonal.
  CHECK_THAT(c_nr(2, 3), WithinAbs(0.0, 1e-13));
  CHECK_THAT(c_nr(0, 1), WithinAbs(0.0, 1e-13));

  // Two-way: <db+db> = (n_a lam^2 + n_b (2k^2 + lam^2)) / (2 (k^2 + lam^2)).
  m.coupling = Reciprocal{};
  const Eigen::MatrixXd c_r = steady_covariance(to_quadrature(build_pair(m)));
  CHECK_THAT(c_r(0, 0), WithinRel(1.2381880733944954, 1e-12));
  CHECK_THAT(c_r(2, 2), WithinRel(0.8118119266055046, 1e-12));
  CHECK_THAT(c_r(2, 3), WithinAbs(0.0, 1e-13));
}

TEST_CASE("steady covariance agrees with the vectorized reference solve") {
  for (unsigned seed : {11u, 12u, 13u, 14u}) {
    const Eigen::MatrixXd a = random_stable_drift(seed, 4);
    const Eigen::MatrixXd d = random_psd(seed + 100, 4);
    const Eigen::MatrixXd fast = steady_covariance(a, d);
    const Eigen::MatrixXd ref = oracle::lyapunov_kron(a, d);
    CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("transient covariance endpoints") {
  ModelSpec m;
  m.kappa = 0.9;
  m.lambda_eff = 1.2;
  m.n_b = 0.3;
  const QuadratureSystem quad = to_quadrature(build_pair(m));
  Eigen::MatrixXd c0 = random_psd(7, 4) + 0.5 * Eigen::MatrixXd::Identity(4, 4);
  CHECK((transient_covariance(quad.drift, quad.diffusion, c0, 0.0) - c0).norm() < 1e-15);
  const Eigen::MatrixXd late = transient_covariance(quad.drift, quad.diffusion, c0, 60.0);
  CHECK((late - steady_covariance(quad)).cwiseAbs().maxCoeff() < 1e-11);
  CHECK_THROWS_AS(transient_covariance(quad.drift, quad.diffusion, c0, -1.0),
                  std::invalid_argument);
}

TEST_CASE("transient covariance composes as a semigroup") {
  ModelSpec m;
  m.kappa = 0.4;
  m.lambda_eff = 1.6;
  m.n_a = 0.5;
  const QuadratureSystem quad = to_quadrature(build_pair(m));
  const Eigen::MatrixXd c0 = 0.5 * Eigen::MatrixXd::Identity(4, 4);
  const Eigen::MatrixXd direct = transient_covariance(quad.drift, quad.diffusion, c0, 2.3);
  const Eigen::MatrixXd mid = transient_covariance(quad.drift, quad.diffusion, c0, 0.9);
  const Eigen::MatrixXd two_step = transient_covariance(quad.drift, quad.diffusion, mid, 1.4);
  CHECK((direct - two_step).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transient covariance survives stiff rates") {
  // |drift| t here is far past the overflow point of a single augmented
  // exponential; the substepped propagation must still hold vacuum fixed.
  ModelSpec m;
  m.kappa = 1000.0;
  const QuadratureSystem quad = to_quadrature(build_pair(m));
  const Eigen::MatrixXd c0 = 0.5 * Eigen::MatrixXd::Identity(4, 4);
  const Eigen::MatrixXd c = transient_covariance(quad.drift, quad.diffusion, c0, 1.5);
  REQUIRE(c.allFinite());
  CHECK((c - c0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("matrix exponential handles the defective one-way drift") {
  // [[-g, 0], [-2 lam, -g]] exponentiates to e^{-gt} [[1, 0], [-2 lam t, 1]].
  const double g = 2.0, lam = 1.0, t = 0.8;
  Eigen::MatrixXcd a(2, 2);
  a << -g, 0.0, -2.0 * lam, -g;
  const Eigen::MatrixXcd e = expm(Eigen::MatrixXcd(t * a));
  const double scale = std::exp(-g * t);
  CHECK(std::abs(e(0, 0) - scale) < 1e-14);
  CHECK(std::abs(e(0, 1)) < 1e-16);
  CHECK(std::abs(e(1, 0) + 2.0 * lam * t * scale) < 1e-14);
  CHECK(std::abs(e(1, 1) - scale) < 1e-14);

  const Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(3, 3);
  CHECK((expm(z) - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);
  CHECK_THROWS_AS(expm(Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(2, 3))), std::invalid_argument);
}

TEST_CASE("matrix exponential agrees with the series reference") {
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 4; ++rep) {
    Eigen::MatrixXcd a(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) a(i, j) = cplx(u(gen), u(gen));
    const Eigen::MatrixXcd fast = expm(a);
    const Eigen::MatrixXcd ref = oracle::series_expm(a);
    CHECK((fast - ref).norm() / std::max(1.0, ref.norm()) < 1e-13);
  }
}

TEST_CASE("transient state carries both moments forward consistently") {
  ModelSpec m;
  m.kappa = 0.6;
  m.lambda_eff = 1.1;
  m.xi = 1.4;
  const LinearSystem sys = build_pair(m);
  const QuadratureSystem quad = to_quadrature(sys);
  MomentState init;
  init.time = 1.0;
  init.mean = Eigen::VectorXd::Zero(4);
  init.covariance = 0.5 * Eigen::MatrixXd::Identity(4, 4);
  const double t = 1.3;
  const MomentState out = transient_state(quad, init, t);
  CHECK(out.time == init.time + t);
  const Eigen::VectorXcd ref = propagate_mean(sys, Eigen::VectorXcd::Zero(2), t);
  CHECK((out.mean - quadrature_mean(ref)).norm() < 1e-12);
  CHECK((out.covariance -
         transient_covariance(quad.drift, quad.diffusion, init.covariance, t))
            .norm() == 0.0);
}
