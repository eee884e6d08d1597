#pragma once

// Entropy-based cause/effect direction test between two discrete variables.
//
// For each candidate direction the conditional columns are coupled with the
// greedy minimum-entropy coupling; the atoms become the states of the
// exogenous variable E. The direction whose input entropy H(cause) + H(E)
// is smaller is declared causal when the gap exceeds t * log2(n).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "entropic/coupling.hpp"
#include "entropic/distribution.hpp"

namespace entropic {

/// Explicit structural function f(input, e) -> output state. Rows of
/// degenerate (probability-zero) inputs are left undefined.
class FunctionTable {
 public:
  static constexpr std::uint32_t kUndefined = std::numeric_limits<std::uint32_t>::max();

  FunctionTable(std::size_t n_inputs, std::size_t n_exogenous, std::size_t n_outputs);
  FunctionTable(std::size_t n_inputs, std::size_t n_exogenous, std::size_t n_outputs,
                std::vector<std::uint32_t> entries);

  [[nodiscard]] std::size_t n_inputs() const noexcept { return n_inputs_; }
  [[nodiscard]] std::size_t n_exogenous() const noexcept { return n_exogenous_; }
  [[nodiscard]] std::size_t n_outputs() const noexcept { return n_outputs_; }
  [[nodiscard]] std::uint32_t operator()(std::size_t input, std::size_t e) const {
    return entries_[input * n_exogenous_ + e];
  }
  void set(std::size_t input, std::size_t e, std::uint32_t output);
  [[nodiscard]] bool defined(std::size_t input) const { return (*this)(input, 0) != kUndefined; }
  [[nodiscard]] const std::vector<std::uint32_t>& entries() const noexcept { return entries_; }

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;

 private:
  std::size_t n_inputs_;
  std::size_t n_exogenous_;
  std::size_t n_outputs_;
  std::vector<std::uint32_t> entries_;
};

struct ExogenousModel {
  Distribution e_dist;
  FunctionTable f;
  double h_e_bits;   // Shannon entropy of e_dist
  double h0_e_bits;  // log2 of the atom count
};

/// Builds (E, f) with f(x, E) ~ P(output | input = x) for every
/// non-degenerate input column.
[[nodiscard]] ExogenousModel exogenous_from_conditional(const ConditionalMatrix& conditional);

/// Output-by-input matrix of P(output, input) implied by input ~ p_input,
/// E ~ model.e_dist independent, output = f(input, E). Exact summation.
[[nodiscard]] Matrix push_forward(const Distribution& p_input, const ExogenousModel& model);

enum class Direction { x_to_y, y_to_x, undecided };

[[nodiscard]] std::string_view to_string(Direction d) noexcept;

struct DirectionVerdict {
  double score_xy_bits = 0.0;  // H(X) + H(E)
  double score_yx_bits = 0.0;  // H(Y) + H(E~)
  double gap_bits = 0.0;       // |score_xy - score_yx|
  std::size_t n_states = 0;    // max(n_x, n_y)
  double threshold_t = 0.0;
  Direction decision = Direction::undecided;
  // One of X, Y has a single supported state; the test carries no
  // directional information and always reports undecided.
  bool degenerate = false;
};

/// Runs the direction test on a joint (rows Y, columns X).
[[nodiscard]] DirectionVerdict infer_direction(const JointMatrix& joint, double t);

/// Re-applies the decision rule at a different threshold without recomputing scores.
[[nodiscard]] DirectionVerdict apply_threshold(DirectionVerdict verdict, double t);

struct H0Scores {
  double h0_xy_bits;
  double h0_yx_bits;
};

/// log2 atom counts of the greedy couplings in each direction: an upper
/// bound on the minimum exogenous cardinality. Diagnostic only.
[[nodiscard]] H0Scores h0_scores(const JointMatrix& joint);

}  // namespace entropic
