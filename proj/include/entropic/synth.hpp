#pragma once

// Random distributions and structural functions, plus the two synthetic
// experiment drivers: greedy coupling excess over the max-marginal bound,
// and the identifiability success rate of the entropy direction test.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "entropic/distribution.hpp"
#include "entropic/inference.hpp"
#include "entropic/rng.hpp"

namespace entropic {

/// Uniform on the (n-1)-simplex: normalized i.i.d. unit exponentials.
[[nodiscard]] Distribution sample_simplex_uniform(std::size_t n, Rng& rng);

/// Normalized i.i.d. log-normal(0, sigma^2) weights; heavier tails give
/// lower entropy.
[[nodiscard]] Distribution sample_low_entropy(std::size_t n, double sigma, Rng& rng);

/// n_inputs x theta table with every entry uniform on [0, n_outputs).
[[nodiscard]] FunctionTable sample_random_function(std::size_t n, std::size_t theta, Rng& rng);

/// Joint (rows Y, columns X) of (X, f(X, E)) for independent X and E.
[[nodiscard]] JointMatrix joint_from_model(const Distribution& p_x, const Distribution& p_e,
                                           const FunctionTable& f);

// Rejection budget per kept sample for the H(E) cap.
inline constexpr std::size_t kMaxRejections = 100000;

struct SynthConfig {
  std::size_t n = 2;
  std::size_t theta = 2;
  std::vector<double> sigmas{2, 3, 4, 5, 6, 7, 8};
  std::size_t trials = 100;  // kept trials per sigma
  std::uint64_t seed = 0;
  double entropy_cap_bits = 1.0;
  unsigned jobs = 1;
  // Replaces the log-normal draw of p_E (tests only); must have theta states.
  std::optional<Distribution> e_override;

  // theta = n(n-1), cap = log2 n.
  static SynthConfig defaults_for(std::size_t n);
  void validate() const;
};

struct TrialRecord {
  double h_x;
  double h_e_true;
  DirectionVerdict verdict;
  bool success;  // score_xy < score_yx
  std::size_t attempts;
};

/// One identifiability trial on its own RNG stream. Throws StarvationError
/// when the cap rejects kMaxRejections draws in a row.
[[nodiscard]] TrialRecord run_identifiability_trial(const SynthConfig& cfg, std::size_t sigma_index,
                                                    std::size_t trial);

struct SigmaSummary {
  double sigma;
  std::size_t trials_kept;  // 0 when starved
  std::size_t successes;
  double success_rate;      // NaN when starved
  bool starved;
};

struct IdentifiabilitySummary {
  std::size_t n;
  std::vector<SigmaSummary> per_sigma;
  std::size_t trials_kept;
  double success_rate;  // pooled over non-starved sigmas
  [[nodiscard]] bool any_starved() const;
};

[[nodiscard]] IdentifiabilitySummary run_identifiability_experiment(const SynthConfig& cfg);

struct BenchmarkRow {
  std::size_t n;
  std::size_t trials;
  double mean_excess;
  double max_excess;
  double min_excess;
};

/// For each n: couple n uniform-simplex marginals of n states, `trials` times.
[[nodiscard]] std::vector<BenchmarkRow> run_greedy_benchmark(const std::vector<std::size_t>& n_range,
                                                             std::size_t trials, std::uint64_t seed,
                                                             unsigned jobs = 1);

void write_identifiability_csv(std::ostream& out, const std::vector<IdentifiabilitySummary>& rows);
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

}  // namespace entropic
