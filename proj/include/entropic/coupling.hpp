#pragma once

// Greedy minimum-entropy coupling of discrete marginals.
//
// Each round takes r = min over variables of that variable's largest
// residual mass, records one atom of mass r at the tuple of argmax states,
// and subtracts r from each of those states. At least one state is
// exhausted per round, so a coupling of m marginals with at most n states
// each has no more than m(n-1)+1 atoms and entropy at most log m + log n.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "entropic/distribution.hpp"

namespace entropic {

// Rounds stop once the largest-residual minimum drops below this; the
// leftover float dust is folded into the final atom.
inline constexpr double kResidualTolerance = 1e-12;

/// Sparse joint mass assignment over the product of m state spaces.
/// Atoms are kept in creation order; cells are stored flat, m indices per atom.
class Coupling {
 public:
  Coupling(std::vector<std::size_t> marginal_dims, std::vector<double> masses,
           std::vector<std::uint32_t> cells);

  [[nodiscard]] std::size_t arity() const noexcept { return dims_.size(); }
  [[nodiscard]] std::size_t atom_count() const noexcept { return masses_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& marginal_dims() const noexcept { return dims_; }
  [[nodiscard]] std::span<const double> masses() const noexcept { return masses_; }
  [[nodiscard]] double mass(std::size_t atom) const { return masses_[atom]; }
  [[nodiscard]] std::span<const std::uint32_t> cell(std::size_t atom) const {
    return {cells_.data() + atom * dims_.size(), dims_.size()};
  }

  // Atom indices ordered by descending mass, creation order breaking ties.
  [[nodiscard]] std::vector<std::size_t> order_by_mass() const;
  // Marginal of coordinate `coord` implied by the atoms.
  [[nodiscard]] std::vector<double> project(std::size_t coord) const;

  friend bool operator==(const Coupling&, const Coupling&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> masses_;
  std::vector<std::uint32_t> cells_;
};

struct CouplingResult {
  Coupling coupling;
  double entropy_bits;
  double lower_bound_bits;  // max_i H(marginal_i)
  double excess_bits;       // entropy_bits - lower_bound_bits
};

[[nodiscard]] CouplingResult greedy_coupling(std::span<const Distribution> marginals);

// Atom masses only (the exogenous distribution), skipping cell bookkeeping.
// Same rounds and masses as greedy_coupling.
[[nodiscard]] std::vector<double> greedy_coupling_masses(std::span<const Distribution> marginals);

/// Two-marginal greedy coupling laid out densely: rows follow `p`, columns `q`.
[[nodiscard]] JointMatrix greedy_joint_matrix(const Distribution& p, const Distribution& q);

struct RankOneMask {
  std::vector<double> u;  // one per row; 0 on empty rows
  std::vector<double> v;  // one per column; 0 on empty columns
  double max_relative_error;
};

struct LocalOptimumVerdict {
  bool acyclic = false;
  std::optional<RankOneMask> mask;
  // Cells (row, col) of one support cycle, set when !acyclic. Rotated to start
  // at the smallest cell and oriented toward its smaller neighbor.
  std::vector<std::pair<std::size_t, std::size_t>> witness_cycle;
};

/// Checks the local-optimality structure of a two-variable coupling: the
/// bipartite support graph is a forest, and every support cell equals
/// u_i * v_k for vectors built by propagation from the first support cell
/// of each component.
[[nodiscard]] LocalOptimumVerdict verify_local_optimum(const JointMatrix& joint);

inline constexpr std::size_t kBruteForceMaxCells = 20;

/// Exact minimum-entropy coupling of two small marginals by enumerating the
/// spanning-tree supports of the transportation polytope (every vertex lies
/// on one). Requires p.size() * q.size() <= kBruteForceMaxCells.
[[nodiscard]] CouplingResult brute_force_min_coupling(const Distribution& p, const Distribution& q);

// Line format: "marginal_dims<TAB>d1,...,dm" header, then one
// "mass<TAB>i1,...,im" line per atom (0-based states, 17 significant digits).
void write_coupling(std::ostream& out, const Coupling& coupling);
[[nodiscard]] Coupling read_coupling(std::istream& in);

}  // namespace entropic
