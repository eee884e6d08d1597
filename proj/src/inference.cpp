#include "entropic/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entropic/errors.hpp"

namespace entropic {

namespace {

struct Columns {
  std::vector<Distribution> marginals;
  std::vector<std::size_t> inputs;  // original input index of each marginal
};

Columns live_columns(const ConditionalMatrix& c) {
  Columns out;
  for (std::size_t x = 0; x < c.n_inputs(); ++x) {
    if (c.is_degenerate(x)) continue;
    out.marginals.emplace_back(c.column(x));
    out.inputs.push_back(x);
  }
  if (out.marginals.empty()) throw ValidationError("conditional matrix has no non-degenerate column");
  return out;
}

// Coupling needs two marginals; a single live column couples with itself.
void pad_single(Columns& cols) {
  if (cols.marginals.size() == 1) cols.marginals.push_back(cols.marginals.front());
}

double exogenous_entropy(const ConditionalMatrix& c) {
  auto cols = live_columns(c);
  pad_single(cols);
  return shannon_entropy(greedy_coupling_masses(cols.marginals));
}

std::size_t exogenous_atoms(const ConditionalMatrix& c) {
  auto cols = live_columns(c);
  pad_single(cols);
  return greedy_coupling_masses(cols.marginals).size();
}

}  // namespace

FunctionTable::FunctionTable(std::size_t n_inputs, std::size_t n_exogenous, std::size_t n_outputs)
    : n_inputs_(n_inputs),
      n_exogenous_(n_exogenous),
      n_outputs_(n_outputs),
      entries_(n_inputs * n_exogenous, kUndefined) {}

FunctionTable::FunctionTable(std::size_t n_inputs, std::size_t n_exogenous, std::size_t n_outputs,
                             std::vector<std::uint32_t> entries)
    : n_inputs_(n_inputs), n_exogenous_(n_exogenous), n_outputs_(n_outputs), entries_(std::move(entries)) {
  if (entries_.size() != n_inputs_ * n_exogenous_) throw ValidationError("function table: wrong entry count");
  for (auto y : entries_)
    if (y != kUndefined && y >= n_outputs_) throw ValidationError("function table: output state out of range");
}

void FunctionTable::set(std::size_t input, std::size_t e, std::uint32_t output) {
  if (output >= n_outputs_) throw ValidationError("function table: output state out of range");
  entries_.at(input * n_exogenous_ + e) = output;
}

ExogenousModel exogenous_from_conditional(const ConditionalMatrix& conditional) {
  auto cols = live_columns(conditional);
  const bool single = cols.marginals.size() == 1;
  pad_single(cols);
  auto result = greedy_coupling(cols.marginals);
  const Coupling& c = result.coupling;

  FunctionTable f(conditional.n_inputs(), c.atom_count(), conditional.n_outputs());
  const std::size_t live = single ? 1 : cols.inputs.size();
  for (std::size_t k = 0; k < c.atom_count(); ++k) {
    const auto cell = c.cell(k);
    for (std::size_t j = 0; j < live; ++j) f.set(cols.inputs[j], k, cell[j]);
  }
  std::vector<double> masses(c.masses().begin(), c.masses().end());
  const double h0 = std::log2(static_cast<double>(masses.size()));
  return ExogenousModel{Distribution(std::move(masses)), std::move(f), result.entropy_bits, h0};
}

Matrix push_forward(const Distribution& p_input, const ExogenousModel& model) {
  const FunctionTable& f = model.f;
  if (p_input.size() != f.n_inputs()) throw ValidationError("push_forward: input size mismatch");
  Matrix out(f.n_outputs(), f.n_inputs());
  for (std::size_t x = 0; x < f.n_inputs(); ++x) {
    if (!f.defined(x)) continue;
    for (std::size_t e = 0; e < f.n_exogenous(); ++e) out(f(x, e), x) += p_input[x] * model.e_dist[e];
  }
  return out;
}

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::x_to_y:
      return "X->Y";
    case Direction::y_to_x:
      return "Y->X";
    case Direction::undecided:
      break;
  }
  return "undecided";
}

DirectionVerdict apply_threshold(DirectionVerdict v, double t) {
  if (!(t >= 0.0)) throw ValidationError("threshold t must be >= 0");
  v.threshold_t = t;
  v.decision = Direction::undecided;
  if (v.degenerate) return v;
  if (v.gap_bits > t * std::log2(static_cast<double>(v.n_states))) {
    v.decision = v.score_xy_bits < v.score_yx_bits ? Direction::x_to_y : Direction::y_to_x;
  }
  return v;
}

DirectionVerdict infer_direction(const JointMatrix& joint, double t) {
  const auto split = conditionals_from_joint(joint);
  DirectionVerdict v;
  v.n_states = std::max(joint.n_rows(), joint.n_cols());
  v.degenerate = split.p_x.support_size() < 2 || split.p_y.support_size() < 2;
  v.score_xy_bits = shannon_entropy(split.p_x) + exogenous_entropy(split.y_given_x);
  v.score_yx_bits = shannon_entropy(split.p_y) + exogenous_entropy(split.x_given_y);
  v.gap_bits = std::abs(v.score_xy_bits - v.score_yx_bits);
  return apply_threshold(v, t);
}

H0Scores h0_scores(const JointMatrix& joint) {
  const auto split = conditionals_from_joint(joint);
  return H0Scores{std::log2(static_cast<double>(exogenous_atoms(split.y_given_x))),
                  std::log2(static_cast<double>(exogenous_atoms(split.x_given_y)))};
}

}  // namespace entropic
