// Acceptance suite: one pass/fail line per criterion, nonzero exit if any fails.
//
// The real-data criterion reads the cause-effect pair directory named by
// ENTROPIC_PAIRS_DIR and is skipped when that variable is unset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "entropic/coupling.hpp"
#include "entropic/inference.hpp"
#include "entropic/pairs.hpp"
#include "entropic/synth.hpp"

using namespace entropic;

namespace {

constexpr std::uint64_t kSeed = 7;

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome check(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Distribution> random_marginals(Rng& rng, std::size_t m, std::size_t n_max) {
  std::vector<Distribution> out;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t n = 1 + rng.uniform_index(n_max);
    if (rng.uniform_index(2) == 0) {
      out.push_back(sample_simplex_uniform(n, rng));
    } else {
      out.push_back(sample_low_entropy(n, 1.0 + 7.0 * rng.uniform01(), rng));
    }
  }
  return out;
}

// --- criterion bodies, each returning the CSV used by the determinism check.

std::vector<BenchmarkRow> excess_rows() {
  std::vector<std::size_t> ns(19);
  std::iota(ns.begin(), ns.end(), std::size_t{2});
  return run_greedy_benchmark(ns, 200, kSeed);
}

std::string excess_csv(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream ss;
  write_benchmark_csv(ss, rows);
  return ss.str();
}

std::string local_optimum_csv(std::size_t& failures, double& worst) {
  std::ostringstream ss;
  ss << "trial,rows,cols,acyclic,max_relative_error\n";
  failures = 0;
  worst = 0.0;
  for (std::size_t t = 0; t < 1000; ++t) {
    Rng rng = Rng::stream(kSeed, {0x3, t});
    const auto m = random_marginals(rng, 2, 32);
    const auto v = verify_local_optimum(greedy_joint_matrix(m[0], m[1]));
    const double err = v.mask ? v.mask->max_relative_error : INFINITY;
    if (!v.acyclic || !(err <= 1e-9)) ++failures;
    worst = std::max(worst, err);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%d,%.6g\n", t, m[0].size(), m[1].size(), v.acyclic ? 1 : 0, err);
    ss << buf;
  }
  return ss.str();
}

std::vector<IdentifiabilitySummary> identifiability_runs(unsigned jobs) {
  std::vector<IdentifiabilitySummary> out;
  for (std::size_t n : {4u, 8u, 16u}) {
    auto cfg = SynthConfig::defaults_for(n);
    cfg.trials = 50;  // per sigma, 7 sigmas -> 350 kept per n
    cfg.seed = kSeed;
    cfg.jobs = jobs;
    out.push_back(run_identifiability_experiment(cfg));
  }
  return out;
}

std::string identifiability_csv(const std::vector<IdentifiabilitySummary>& runs) {
  std::ostringstream ss;
  write_identifiability_csv(ss, runs);
  return ss.str();
}

// --- criteria

Outcome ac1_excess_bound(std::string& csv) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = excess_rows();
  csv = excess_csv(rows);
  double worst = -INFINITY, lowest = INFINITY;
  for (const auto& r : rows) {
    worst = std::max(worst, r.max_excess);
    lowest = std::min(lowest, r.min_excess);
  }
  const double secs = seconds_since(t0);
  return check(worst <= 1.0 + 1e-9 && lowest >= -1e-9 && secs < 30.0,
               fmt("n=2..20 x 200 trials: max excess %.6f bits (<= 1), min %.3g, %.2fs", worst, lowest, secs));
}

Outcome ac2_structural_bounds() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t violations = 0;
  double worst_proj = 0.0, worst_upper_slack = INFINITY;
  for (std::size_t t = 0; t < 10000; ++t) {
    Rng rng = Rng::stream(kSeed, {0x2, t});
    const std::size_t m = 2 + rng.uniform_index(4);
    const auto marginals = random_marginals(rng, m, 64);
    const auto r = greedy_coupling(marginals);
    std::size_t n_max = 0;
    for (const auto& d : marginals) n_max = std::max(n_max, d.size());
    const double upper = std::log2(double(m)) + std::log2(double(n_max));
    worst_upper_slack = std::min(worst_upper_slack, upper - r.entropy_bits);
    bool ok = r.entropy_bits >= r.lower_bound_bits - 1e-9 && r.entropy_bits <= upper + 1e-9 &&
              r.coupling.atom_count() <= m * (n_max - 1) + 1;
    for (std::size_t i = 0; i < m; ++i) {
      const auto proj = r.coupling.project(i);
      for (std::size_t s = 0; s < proj.size(); ++s) {
        const double e = std::abs(proj[s] - marginals[i][s]);
        worst_proj = std::max(worst_proj, e);
        ok = ok && e <= 1e-8;
      }
    }
    if (!ok) ++violations;
  }
  const double secs = seconds_since(t0);
  return check(violations == 0 && secs < 60.0,
               fmt("10^4 instances: %.0f violations, worst projection error %.3g, min upper-bound slack %.3g, %.2fs",
                   double(violations), worst_proj, worst_upper_slack, secs));
}

Outcome ac3_local_optimum(std::string& csv) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t failures = 0;
  double worst = 0.0;
  csv = local_optimum_csv(failures, worst);
  const double secs = seconds_since(t0);
  return check(failures == 0 && secs < 10.0,
               fmt("10^3 instances: %.0f failures, worst rank-1 relative error %.3g, %.2fs", double(failures), worst,
                   secs));
}

Outcome ac4_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t grid_mismatch = 0;
  double grid_worst = 0.0;
  for (int a = 1; a <= 19; ++a) {
    for (int b = 1; b <= 19; ++b) {
      const Distribution p({a * 0.05, 1.0 - a * 0.05});
      const Distribution q({b * 0.05, 1.0 - b * 0.05});
      const std::vector<Distribution> pq{p, q};
      const double g = greedy_coupling(pq).entropy_bits;
      const double o = brute_force_min_coupling(p, q).entropy_bits;
      grid_worst = std::max(grid_worst, std::abs(g - o));
      if (std::abs(g - o) > 1e-9) ++grid_mismatch;
    }
  }
  std::string gaps;
  bool random_ok = true;
  for (std::size_t n : {3u, 4u}) {
    std::vector<double> gap;
    for (std::size_t t = 0; t < 100; ++t) {
      Rng rng = Rng::stream(kSeed, {0x4, n, t});
      const auto p = sample_simplex_uniform(n, rng);
      const auto q = sample_simplex_uniform(n, rng);
      const std::vector<Distribution> pq{p, q};
      const double g = greedy_coupling(pq).entropy_bits;
      const double o = brute_force_min_coupling(p, q).entropy_bits;
      random_ok = random_ok && g >= o - 1e-9;
      gap.push_back(g - o);
    }
    std::sort(gap.begin(), gap.end());
    const auto optimal = std::count_if(gap.begin(), gap.end(), [](double x) { return x <= 1e-9; });
    gaps += fmt("; %.0fx%.0f gap: %.0f%% optimal, median %.3g", double(n), double(n), double(optimal), gap[50]);
    gaps += fmt(", max %.3g", gap.back());
  }
  const double secs = seconds_since(t0);
  return check(grid_mismatch == 0 && random_ok && secs < 120.0,
               fmt("361 grid pairs: %.0f mismatches, worst |greedy-oracle| %.3g", double(grid_mismatch), grid_worst) +
                   gaps + fmt(", %.2fs", secs));
}

Outcome ac5_identifiability(std::string& csv) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto runs = identifiability_runs(1);
  csv = identifiability_csv(runs);
  bool ok = true;
  std::string detail;
  double prev = -1.0;
  for (const auto& r : runs) {
    ok = ok && !r.any_starved() && r.trials_kept >= 300 && r.success_rate >= prev;
    prev = r.success_rate;
    detail += fmt("n=%.0f: %.4f over %.0f kept; ", double(r.n), r.success_rate, double(r.trials_kept));
  }
  ok = ok && runs.back().success_rate > 0.9;
  const double secs = seconds_since(t0);
  return check(ok && secs < 600.0, detail + fmt("%.2fs", secs));
}

Outcome ac6_reconstruction() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t t = 0; t < 1000; ++t) {
    Rng rng = Rng::stream(kSeed, {0x6, t});
    const std::size_t nx = 2 + rng.uniform_index(15), ny = 2 + rng.uniform_index(15);
    const std::size_t theta = 1 + rng.uniform_index(30);
    const auto p_x = sample_simplex_uniform(nx, rng);
    const auto p_e = sample_low_entropy(theta, 3.0, rng);
    std::vector<std::uint32_t> entries(nx * theta);
    for (auto& y : entries) y = static_cast<std::uint32_t>(rng.uniform_index(ny));
    const auto joint = joint_from_model(p_x, p_e, FunctionTable(nx, theta, ny, std::move(entries)));
    const auto split = conditionals_from_joint(joint);
    const auto fwd = push_forward(split.p_x, exogenous_from_conditional(split.y_given_x));
    const auto rev = push_forward(split.p_y, exogenous_from_conditional(split.x_given_y));
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t x = 0; x < nx; ++x)
        worst = std::max({worst, std::abs(fwd(y, x) - joint(y, x)), std::abs(rev(x, y) - joint(y, x))});
  }
  const double secs = seconds_since(t0);
  return check(worst <= 1e-8 && secs < 30.0, fmt("10^3 joints, both directions: worst cell error %.3g, %.2fs", worst, secs));
}

Outcome ac7_counterexamples() {
  // Symmetric: f(x, e) = e, so Y carries no trace of X.
  const auto sym = conditionals_from_joint(joint_from_model(
      Distribution({0.5, 0.3, 0.2}), Distribution({0.6, 0.25, 0.15}), FunctionTable(3, 3, 3, {0, 1, 2, 0, 1, 2, 0, 1, 2})));
  const std::size_t sym_atoms = exogenous_from_conditional(sym.x_given_y).e_dist.size();
  // Zero entry: X = 0 forces Y = 0; X = 1 splits four E-states two and two.
  const auto zero = conditionals_from_joint(joint_from_model(Distribution({0.35, 0.65}),
                                                             Distribution({0.1, 0.2, 0.3, 0.4}),
                                                             FunctionTable(2, 4, 2, {0, 0, 0, 0, 0, 0, 1, 1})));
  const std::size_t zero_atoms = exogenous_from_conditional(zero.x_given_y).e_dist.size();
  return check(sym_atoms == 3 && zero_atoms == 2,
               fmt("symmetric 3-state reverse atoms = %.0f (want 3); zero-entry 2x2 reverse atoms = %.0f (want 2)",
                   double(sym_atoms), double(zero_atoms)));
}

Outcome ac8_real_data() {
  const char* dir = std::getenv("ENTROPIC_PAIRS_DIR");
  if (!dir || !*dir) return {Status::skip, "ENTROPIC_PAIRS_DIR not set; external pair repository unavailable"};
  const auto ds = load_pairs(dir);
  const auto pt = evaluate_dataset(ds, {0.0}).points.front();
  const double lo = 0.6421 - 0.10, hi = 0.6421 + 0.10;
  return check(pt.accuracy >= lo && pt.accuracy <= hi,
               fmt("%.0f pairs at t=0: weighted accuracy %.4f (band [0.5421, 0.7421]), unweighted %.4f, decision rate %.3f",
                   double(ds.pairs.size()), pt.accuracy, pt.accuracy_unweighted, pt.decision_rate));
}

Outcome ac9_determinism(const std::string& csv1, const std::string& csv3, const std::string& csv5) {
  std::size_t failures = 0;
  double worst = 0.0;
  const bool same1 = excess_csv(excess_rows()) == csv1;
  const bool same3 = local_optimum_csv(failures, worst) == csv3;
  const bool same5 = identifiability_csv(identifiability_runs(4)) == csv5;
  return check(same1 && same3 && same5 && !csv1.empty() && !csv3.empty() && !csv5.empty(),
               std::string("byte-identical reruns: AC1 ") + (same1 ? "yes" : "no") + ", AC3 " + (same3 ? "yes" : "no") +
                   ", AC5 with 4 jobs " + (same5 ? "yes" : "no"));
}

}  // namespace

int main() {
  std::string csv1, csv3, csv5;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 greedy excess bound", [&] { return ac1_excess_bound(csv1); }},
      {"AC2 structural bounds", ac2_structural_bounds},
      {"AC3 two-variable local optimum", [&] { return ac3_local_optimum(csv3); }},
      {"AC4 oracle equivalence", ac4_oracle},
      {"AC5 identifiability trend", [&] { return ac5_identifiability(csv5); }},
      {"AC6 reconstruction identity", ac6_reconstruction},
      {"AC7 counterexample fixtures", ac7_counterexamples},
      {"AC8 real-data accuracy", ac8_real_data},
      {"AC9 determinism", [&] { return ac9_determinism(csv1, csv3, csv5); }},
  };
  int failed = 0;
  for (const auto& [name, body] : criteria) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::skip ? "SKIP" : "FAIL";
    std::printf("[%s] %s: %s\n", tag, name, o.detail.c_str());
    std::fflush(stdout);
    if (o.status == Status::fail) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
