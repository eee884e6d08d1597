#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "entropic/coupling.hpp"

namespace entropic {

namespace {

// Bipartite support graph: vertices 0..rows-1 are rows, rows..rows+cols-1 are columns.
struct SupportGraph {
  std::size_t rows;
  std::size_t cols;
  std::vector<std::vector<std::size_t>> adj;

  explicit SupportGraph(const Matrix& m) : rows(m.rows()), cols(m.cols()), adj(m.rows() + m.cols()) {}

  void add(std::size_t r, std::size_t c) {
    adj[r].push_back(rows + c);
    adj[rows + c].push_back(r);
  }

  // Vertex path from `from` to `to` inside the current forest.
  [[nodiscard]] std::vector<std::size_t> path(std::size_t from, std::size_t to) const {
    std::vector<std::size_t> parent(adj.size(), adj.size());
    std::deque<std::size_t> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      if (v == to) break;
      for (std::size_t w : adj[v]) {
        if (parent[w] == adj.size()) {
          parent[w] = v;
          queue.push_back(w);
        }
      }
    }
    std::vector<std::size_t> out{to};
    for (std::size_t v = to; v != from; v = parent[v]) out.push_back(parent[v]);
    std::reverse(out.begin(), out.end());
    return out;
  }

  [[nodiscard]] std::pair<std::size_t, std::size_t> cell(std::size_t a, std::size_t b) const {
    return a < rows ? std::pair{a, b - rows} : std::pair{b, a - rows};
  }
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) v = parent[v] = parent[parent[v]];
  return v;
}

using Cell = std::pair<std::size_t, std::size_t>;

std::vector<Cell> canonical_cycle(std::vector<Cell> cycle) {
  const auto first = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), first, cycle.end());
  if (cycle.size() > 2 && cycle.back() < cycle[1]) std::reverse(cycle.begin() + 1, cycle.end());
  return cycle;
}

RankOneMask propagate(const Matrix& m, const SupportGraph& g) {
  const std::size_t rows = m.rows();
  std::vector<double> u(rows, 0.0), v(m.cols(), 0.0);
  std::vector<bool> seen(rows + m.cols(), false);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (seen[r] || m(r, c) <= kZeroTolerance) continue;
      // New component: seed at its first support cell in row-major order.
      u[r] = 1.0;
      seen[r] = true;
      std::deque<std::size_t> queue{r};
      while (!queue.empty()) {
        const std::size_t a = queue.front();
        queue.pop_front();
        for (std::size_t b : g.adj[a]) {
          if (seen[b]) continue;
          seen[b] = true;
          const auto [i, k] = g.cell(a, b);
          if (a < rows) {
            v[k] = m(i, k) / u[i];
          } else {
            u[i] = m(i, k) / v[k];
          }
          queue.push_back(b);
        }
      }
    }
  }
  double worst = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) > kZeroTolerance) worst = std::max(worst, std::abs(u[r] * v[c] - m(r, c)) / m(r, c));
  return RankOneMask{std::move(u), std::move(v), worst};
}

}  // namespace

LocalOptimumVerdict verify_local_optimum(const JointMatrix& joint) {
  const Matrix& m = joint.cells();
  SupportGraph g(m);
  std::vector<std::size_t> parent(m.rows() + m.cols());
  std::iota(parent.begin(), parent.end(), std::size_t{0});

  LocalOptimumVerdict verdict;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) <= kZeroTolerance) continue;
      const std::size_t a = find_root(parent, r);
      const std::size_t b = find_root(parent, m.rows() + c);
      if (a == b) {
        const auto path = g.path(r, m.rows() + c);
        std::vector<Cell> cycle;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) cycle.push_back(g.cell(path[i], path[i + 1]));
        cycle.emplace_back(r, c);
        verdict.witness_cycle = canonical_cycle(std::move(cycle));
        return verdict;
      }
      parent[a] = b;
      g.add(r, c);
    }
  }
  verdict.acyclic = true;
  verdict.mask = propagate(m, g);
  return verdict;
}

}  // namespace entropic
