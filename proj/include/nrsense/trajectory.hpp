#pragma once
// trajectory.hpp: Euler-Maruyama sampling oracle for the quadrature SDE
//   dx = (drift x + drive) dt + B dW,   B B^T = diffusion.
// This is the slow stochastic cross-check for the deterministic moment
// pipeline. Sampling is fully deterministic for a fixed (seed, n_traj, dt,
// t_end): each trajectory draws from its own generator seeded by a splitmix
// hash of (seed, trajectory index), and reduction runs in index order.

#include <nrsense/model.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nrsense {

struct SimConfig {
  double dt = 1e-3;
  double t_end = 10.0;
  std::int64_t n_traj = 1000;
  std::uint64_t seed = 1;
};

struct SampleStats {
  double time = 0.0;
  std::int64_t n_traj = 0;
  Eigen::VectorXd mean;        // sample mean of the quadratures at t_end
  Eigen::MatrixXd covariance;  // unbiased sample covariance at t_end
  Eigen::VectorXd mean_se;     // standard error of each mean component
};

namespace detail {

// splitmix64 step; used to derive independent per-trajectory stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::int64_t index) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1));
  return splitmix64(s);
}

// Uniform in (0, 1]; splitting the raw 64-bit draw keeps the stream portable
// across standard libraries (no distribution objects involved).
inline double u01(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller pair.
inline void normal_pair(std::mt19937_64& gen, double& z0, double& z1) {
  const double u1 = u01(gen);
  const double u2 = u01(gen);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  z0 = r * std::cos(a);
  z1 = r * std::sin(a);
}

// Symmetric PSD square root via eigendecomposition, tolerant of the rank
// deficiency that shows up when some baths carry zero amplitude.
inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_sqrt: eigendecomposition failed");
  const double floor = -1e-12 * std::max(1.0, m.norm());
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < floor) throw std::invalid_argument("psd_sqrt: matrix is not PSD");
    ev(i) = std::sqrt(std::max(0.0, ev(i)));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

// Samples n_traj independent trajectories from x0 and returns the moment
// estimates at t_end. Requires a strictly stable drift and a step small
// enough that dt <= 0.01 / |stability margin|.
inline SampleStats simulate(const QuadratureSystem& sys, const Eigen::VectorXd& x0,
                            const SimConfig& cfg) {
  const int dim = static_cast<int>(sys.drift.rows());
  if (x0.size() != dim) throw std::invalid_argument("simulate: x0 dimension mismatch");
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
    throw std::invalid_argument("simulate: dt and t_end must be > 0");
  if (cfg.n_traj < 100) throw std::invalid_argument("simulate: n_traj must be >= 100");
  const double margin = stability_margin(sys);
  if (!(margin < 0.0)) throw std::invalid_argument("simulate: drift must be strictly stable");
  if (cfg.dt > 0.01 / std::abs(margin))
    throw std::invalid_argument("simulate: dt exceeds 0.01/|stability margin|");

  const auto n_steps = static_cast<std::int64_t>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
  const Eigen::MatrixXd step_drift =
      Eigen::MatrixXd::Identity(dim, dim) + cfg.dt * sys.drift;
  const Eigen::VectorXd step_drive = cfg.dt * sys.drive;
  const Eigen::MatrixXd noise_map = std::sqrt(cfg.dt) * detail::psd_sqrt(sys.diffusion);

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd x(dim), z(dim), next(dim);

  for (std::int64_t traj = 0; traj < cfg.n_traj; ++traj) {
    std::mt19937_64 gen(detail::stream_seed(cfg.seed, traj));
    x = x0;
    for (std::int64_t s = 0; s < n_steps; ++s) {
      for (int i = 0; i < dim; i += 2) detail::normal_pair(gen, z(i), z(i + 1));
      next.noalias() = step_drift * x;
      next += step_drive;
      next.noalias() += noise_map * z;
      x.swap(next);
    }
    sum += x;
    sum_sq.noalias() += x * x.transpose();
  }

  SampleStats out;
  out.time = static_cast<double>(n_steps) * cfg.dt;
  out.n_traj = cfg.n_traj;
  out.mean = sum / static_cast<double>(cfg.n_traj);
  const double denom = static_cast<double>(cfg.n_traj - 1);
  out.covariance =
      (sum_sq - static_cast<double>(cfg.n_traj) * out.mean * out.mean.transpose()) / denom;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  out.mean_se = (out.covariance.diagonal() / static_cast<double>(cfg.n_traj)).cwiseSqrt();
  return out;
}

}  // namespace nrsense
