#pragma once

// Real-valued cause-effect pair datasets: loading, equal-width
// quantization, empirical joints, and accuracy-vs-decision-rate curves.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entropic/distribution.hpp"
#include "entropic/errors.hpp"
#include "entropic/inference.hpp"

namespace entropic {

class DatasetError : public IoError {
 public:
  enum class Kind { empty_directory, missing_metadata, bad_metadata, missing_pair_file, unparsable_row, empty_dataset };

  DatasetError(Kind kind, const std::string& what) : IoError(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::size_t kMinPairSamples = 20;
inline constexpr std::size_t kMaxQuantizationLevels = 512;

struct CausePair {
  std::string id;
  std::vector<std::pair<double, double>> samples;
  Direction ground_truth;  // x_to_y or y_to_x
  double weight;
};

struct PairDataset {
  std::vector<CausePair> pairs;
  std::vector<std::string> warnings;
};

/// Reads pair####.txt files plus metadata. Metadata is either
/// "pairs_meta.txt" with "id dir weight" lines (dir is "->" or "<-"), or the
/// repository's own "pairmeta.txt" with "id cause_first cause_last
/// effect_first effect_last weight" lines. Multivariate or short pairs are
/// skipped with a warning.
[[nodiscard]] PairDataset load_pairs(const std::filesystem::path& dir);

struct QuantizedPairs {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> states;  // 0-based (x, y)
  std::size_t n;
};

/// n = n_override or max(2, min(N/10, 512)); each axis binned by equal
/// widths over its observed range, last bin closed. Constant axes map to state 0.
[[nodiscard]] QuantizedPairs quantize_pair(const std::vector<std::pair<double, double>>& samples,
                                           std::optional<std::size_t> n_override = std::nullopt);

/// cell(y, x) = count(x, y) / N.
[[nodiscard]] JointMatrix empirical_joint(const QuantizedPairs& q);

/// Exact binomial interval for k successes out of n at level 1 - alpha.
[[nodiscard]] std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double alpha);

struct EvalPoint {
  double t;
  double decision_rate;        // weighted fraction decided
  double accuracy;             // weighted fraction of decided pairs that are correct; NaN if none
  double accuracy_unweighted;  // the point estimate the interval brackets
  double ci_low;
  double ci_high;
  std::size_t n_decided;
};

struct EvalCurve {
  std::vector<EvalPoint> points;
};

/// Scores every pair once, then applies the threshold rule at each t.
[[nodiscard]] EvalCurve evaluate_dataset(const PairDataset& ds, const std::vector<double>& t_grid,
                                         double alpha = 0.05, unsigned jobs = 1);

void write_eval_csv(std::ostream& out, const EvalCurve& curve);

}  // namespace entropic
