// Acceptance gate: runs the full verification suite at production size and
// prints one PASS/FAIL line per criterion. Tolerances are pinned inside the
// suite; nothing here is configurable. Exit 1 on any failure.

#include <nrsense/verify.hpp>

#include <cstdio>

int main() {
  nrsense::VerifyOptions opt;
  opt.grid_tol = 1e-8;
  opt.with_monte_carlo = true;
  opt.mc_traj = 100000;
  opt.seed = 20260814;

  const std::vector<nrsense::CheckResult> checks = nrsense::run_verify(opt);

  bool all_passed = true;
  for (const nrsense::CriterionSummary& s : nrsense::summarize(checks)) {
    all_passed = all_passed && s.passed;
    std::printf("ACCEPTANCE %d %-28s %s (%d checks)\n", s.criterion,
                nrsense::criterion_title(s.criterion), s.passed ? "PASS" : "FAIL", s.n_checks);
  }
  for (const nrsense::CheckResult& r : checks) {
    if (r.gating && !r.passed)
      std::printf("  failed: [%d] %s (worst %.6g, tol %.6g; %s)\n", r.criterion, r.name.c_str(),
                  r.worst, r.tolerance, r.detail.c_str());
  }
  for (const nrsense::CheckResult& r : checks) {
    if (!r.gating)
      std::printf("  info:   [%d] %s (measured %.6g; %s)\n", r.criterion, r.name.c_str(),
                  r.worst, r.detail.c_str());
  }
  return all_passed ? 0 : 1;
}
