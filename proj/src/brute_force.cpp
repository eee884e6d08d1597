#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "entropic/coupling.hpp"
#include "entropic/errors.hpp"

namespace entropic {

namespace {

// Solved vertices may carry float noise of this size on structurally zero cells.
constexpr double kFeasibilitySlack = 1e-12;

struct Edge {
  std::size_t row;
  std::size_t col;
};

bool is_spanning_tree(std::span<const Edge> edges, std::size_t rows, std::size_t cols) {
  std::vector<std::size_t> parent(rows + cols);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge& e : edges) {
    const std::size_t a = root(e.row), b = root(rows + e.col);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

// Unique mass assignment on a spanning-tree support, by peeling leaves.
std::vector<double> solve_tree(std::span<const Edge> edges, const Distribution& p, const Distribution& q) {
  const std::size_t rows = p.size();
  std::vector<double> residual(rows + q.size());
  for (std::size_t i = 0; i < rows; ++i) residual[i] = p[i];
  for (std::size_t k = 0; k < q.size(); ++k) residual[rows + k] = q[k];
  std::vector<std::size_t> degree(residual.size(), 0);
  for (const Edge& e : edges) {
    ++degree[e.row];
    ++degree[rows + e.col];
  }
  std::vector<double> mass(edges.size(), 0.0);
  std::vector<bool> done(edges.size(), false);
  for (std::size_t solved = 0; solved < edges.size(); ++solved) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (done[i]) continue;
      const std::size_t a = edges[i].row, b = rows + edges[i].col;
      std::size_t leaf, other;
      if (degree[a] == 1) {
        leaf = a;
        other = b;
      } else if (degree[b] == 1) {
        leaf = b;
        other = a;
      } else {
        continue;
      }
      mass[i] = residual[leaf];
      residual[other] -= mass[i];
      residual[leaf] = 0.0;
      --degree[a];
      --degree[b];
      done[i] = true;
      break;
    }
  }
  return mass;
}

}  // namespace

CouplingResult brute_force_min_coupling(const Distribution& p, const Distribution& q) {
  const std::size_t rows = p.size(), cols = q.size();
  if (rows * cols > kBruteForceMaxCells)
    throw ValidationError("brute_force_min_coupling: " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " exceeds the " + std::to_string(kBruteForceMaxCells) + "-cell cap");

  std::vector<Edge> all;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) all.push_back({r, c});
  const std::size_t tree_size = rows + cols - 1;

  double best_h = std::numeric_limits<double>::infinity();
  std::vector<double> best_masses;
  std::vector<std::uint32_t> best_cells;

  // Walk all tree_size-subsets of the cells in lexicographic order.
  std::vector<std::size_t> pick(tree_size);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::vector<Edge> edges(tree_size);
  while (true) {
    for (std::size_t i = 0; i < tree_size; ++i) edges[i] = all[pick[i]];
    if (is_spanning_tree(edges, rows, cols)) {
      const auto mass = solve_tree(edges, p, q);
      if (std::all_of(mass.begin(), mass.end(), [](double m) { return m >= -kFeasibilitySlack; })) {
        std::vector<double> masses;
        std::vector<std::uint32_t> cells;
        for (std::size_t i = 0; i < tree_size; ++i) {
          if (mass[i] <= kFeasibilitySlack) continue;
          masses.push_back(mass[i]);
          cells.push_back(static_cast<std::uint32_t>(edges[i].row));
          cells.push_back(static_cast<std::uint32_t>(edges[i].col));
        }
        const double h = shannon_entropy(masses);
        if (h < best_h) {
          best_h = h;
          best_masses = std::move(masses);
          best_cells = std::move(cells);
        }
      }
    }
    std::size_t i = tree_size;
    while (i > 0 && pick[i - 1] == all.size() - tree_size + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < tree_size; ++j) pick[j] = pick[j - 1] + 1;
  }

  Coupling coupling({rows, cols}, std::move(best_masses), std::move(best_cells));
  const double lower = std::max(shannon_entropy(p), shannon_entropy(q));
  return CouplingResult{std::move(coupling), best_h, lower, best_h - lower};
}

}  // namespace entropic
