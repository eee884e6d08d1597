#include "entropic/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "entropic/errors.hpp"
#include "entropic/parallel.hpp"

namespace entropic {

namespace {

// Stream tags keep the two experiments' RNG streams disjoint.
constexpr std::uint64_t kIdentifiabilityTag = 0x1d;
constexpr std::uint64_t kBenchmarkTag = 0xbe;

Distribution normalize(std::vector<double> w) {
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return Distribution(std::move(w));
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

Distribution sample_simplex_uniform(std::size_t n, Rng& rng) {
  if (n == 0) throw ValidationError("sample_simplex_uniform: n must be >= 1");
  std::vector<double> w(n);
  for (double& x : w) x = rng.exponential();
  return normalize(std::move(w));
}

Distribution sample_low_entropy(std::size_t n, double sigma, Rng& rng) {
  if (n == 0) throw ValidationError("sample_low_entropy: n must be >= 1");
  if (!(sigma > 0.0)) throw ValidationError("sample_low_entropy: sigma must be > 0");
  // Normalize in log space so large sigma cannot overflow exp().
  std::vector<double> w(n);
  for (double& x : w) x = sigma * rng.standard_normal();
  const double top = *std::max_element(w.begin(), w.end());
  for (double& x : w) x = std::exp(x - top);
  return normalize(std::move(w));
}

FunctionTable sample_random_function(std::size_t n, std::size_t theta, Rng& rng) {
  if (n < 2) throw ValidationError("sample_random_function: n must be >= 2");
  if (theta < 1) throw ValidationError("sample_random_function: theta must be >= 1");
  std::vector<std::uint32_t> entries(n * theta);
  for (auto& y : entries) y = static_cast<std::uint32_t>(rng.uniform_index(n));
  return FunctionTable(n, theta, n, std::move(entries));
}

JointMatrix joint_from_model(const Distribution& p_x, const Distribution& p_e, const FunctionTable& f) {
  if (f.n_inputs() != p_x.size() || f.n_exogenous() != p_e.size())
    throw ValidationError("joint_from_model: shape mismatch");
  Matrix cells(f.n_outputs(), f.n_inputs());
  for (std::size_t x = 0; x < f.n_inputs(); ++x)
    for (std::size_t e = 0; e < f.n_exogenous(); ++e) cells(f(x, e), x) += p_x[x] * p_e[e];
  return JointMatrix(std::move(cells));
}

SynthConfig SynthConfig::defaults_for(std::size_t n) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.theta = n * (n - 1);
  cfg.entropy_cap_bits = std::log2(static_cast<double>(n));
  return cfg;
}

void SynthConfig::validate() const {
  if (n < 2) throw ValidationError("synth: n must be >= 2");
  if (theta < 1) throw ValidationError("synth: theta must be >= 1");
  if (trials < 1) throw ValidationError("synth: trials must be >= 1");
  if (sigmas.empty()) throw ValidationError("synth: no sigma values");
  for (double s : sigmas)
    if (!(s > 0.0)) throw ValidationError("synth: sigma must be > 0");
  if (e_override && e_override->size() != theta) throw ValidationError("synth: e_override must have theta states");
}

TrialRecord run_identifiability_trial(const SynthConfig& cfg, std::size_t sigma_index, std::size_t trial) {
  const double sigma = cfg.sigmas.at(sigma_index);
  Rng rng = Rng::stream(cfg.seed, {kIdentifiabilityTag, cfg.n, cfg.theta, std::bit_cast<std::uint64_t>(sigma),
                                   static_cast<std::uint64_t>(trial)});
  std::optional<Distribution> p_e = cfg.e_override;
  std::size_t attempts = p_e ? 1 : 0;
  while (!p_e) {
    if (attempts == kMaxRejections)
      throw StarvationError("identifiability: H(E) cap rejected " + std::to_string(kMaxRejections) +
                            " draws at sigma " + fmt(sigma));
    ++attempts;
    auto draw = sample_low_entropy(cfg.theta, sigma, rng);
    if (shannon_entropy(draw) <= cfg.entropy_cap_bits) p_e = std::move(draw);
  }
  const auto p_x = sample_simplex_uniform(cfg.n, rng);
  const auto f = sample_random_function(cfg.n, cfg.theta, rng);
  const auto verdict = infer_direction(joint_from_model(p_x, *p_e, f), 0.0);
  return TrialRecord{shannon_entropy(p_x), shannon_entropy(*p_e), verdict,
                     verdict.score_xy_bits < verdict.score_yx_bits, attempts};
}

bool IdentifiabilitySummary::any_starved() const {
  return std::any_of(per_sigma.begin(), per_sigma.end(), [](const SigmaSummary& s) { return s.starved; });
}

IdentifiabilitySummary run_identifiability_experiment(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n_sigma = cfg.sigmas.size();
  const std::size_t total = n_sigma * cfg.trials;
  // 1 success, 0 failure, -1 starved.
  std::vector<int> outcome(total, 0);
  parallel_for(total, cfg.jobs, [&](std::size_t i) {
    try {
      outcome[i] = run_identifiability_trial(cfg, i / cfg.trials, i % cfg.trials).success ? 1 : 0;
    } catch (const StarvationError&) {
      outcome[i] = -1;
    }
  });

  IdentifiabilitySummary summary{cfg.n, {}, 0, 0.0};
  std::size_t pooled_success = 0;
  for (std::size_t s = 0; s < n_sigma; ++s) {
    SigmaSummary row{cfg.sigmas[s], 0, 0, 0.0, false};
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const int o = outcome[s * cfg.trials + t];
      if (o < 0) row.starved = true;
      row.successes += o > 0 ? 1 : 0;
    }
    if (row.starved) {
      row.successes = 0;
      row.success_rate = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.trials_kept = cfg.trials;
      row.success_rate = static_cast<double>(row.successes) / static_cast<double>(cfg.trials);
      summary.trials_kept += row.trials_kept;
      pooled_success += row.successes;
    }
    summary.per_sigma.push_back(row);
  }
  summary.success_rate = summary.trials_kept
                             ? static_cast<double>(pooled_success) / static_cast<double>(summary.trials_kept)
                             : std::numeric_limits<double>::quiet_NaN();
  return summary;
}

std::vector<BenchmarkRow> run_greedy_benchmark(const std::vector<std::size_t>& n_range, std::size_t trials,
                                               std::uint64_t seed, unsigned jobs) {
  if (trials < 1) throw ValidationError("greedy benchmark: trials must be >= 1");
  for (std::size_t n : n_range)
    if (n < 2) throw ValidationError("greedy benchmark: n must be >= 2");

  std::vector<BenchmarkRow> rows;
  for (std::size_t n : n_range) {
    std::vector<double> excess(trials);
    parallel_for(trials, jobs, [&](std::size_t t) {
      Rng rng = Rng::stream(seed, {kBenchmarkTag, n, static_cast<std::uint64_t>(t)});
      std::vector<Distribution> marginals;
      marginals.reserve(n);
      for (std::size_t i = 0; i < n; ++i) marginals.push_back(sample_simplex_uniform(n, rng));
      excess[t] = greedy_coupling(marginals).excess_bits;
    });
    BenchmarkRow row{n, trials, 0.0, excess.front(), excess.front()};
    for (double e : excess) {
      row.mean_excess += e;
      row.max_excess = std::max(row.max_excess, e);
      row.min_excess = std::min(row.min_excess, e);
    }
    row.mean_excess /= static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

void write_identifiability_csv(std::ostream& out, const std::vector<IdentifiabilitySummary>& rows) {
  out << "n,sigma,trials_kept,success_rate\n";
  for (const auto& summary : rows)
    for (const auto& s : summary.per_sigma)
      out << summary.n << ',' << fmt(s.sigma) << ',' << s.trials_kept << ',' << fmt(s.success_rate) << '\n';
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << "n,trials,mean_excess,max_excess,min_excess\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.trials << ',' << fmt(r.mean_excess) << ',' << fmt(r.max_excess) << ','
        << fmt(r.min_excess) << '\n';
}

}  // namespace entropic
