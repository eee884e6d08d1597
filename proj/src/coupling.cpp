#include "entropic/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "entropic/errors.hpp"

namespace entropic {

namespace {

struct Residual {
  double mass;
  std::uint32_t state;
};

// Max-heap order: larger mass first, lower state index on ties.
struct HeapLess {
  bool operator()(const Residual& a, const Residual& b) const noexcept {
    if (a.mass != b.mass) return a.mass < b.mass;
    return a.state > b.state;
  }
};

class ResidualHeap {
 public:
  explicit ResidualHeap(const Distribution& d) {
    heap_.reserve(d.size());
    for (std::size_t s = 0; s < d.size(); ++s)
      if (d[s] > 0.0) heap_.push_back({d[s], static_cast<std::uint32_t>(s)});
    std::make_heap(heap_.begin(), heap_.end(), HeapLess{});
  }

  [[nodiscard]] bool empty() const noexcept { return heap_.empty(); }
  [[nodiscard]] const Residual& top() const { return heap_.front(); }

  void take(double r) {
    std::pop_heap(heap_.begin(), heap_.end(), HeapLess{});
    Residual& last = heap_.back();
    last.mass -= r;
    if (last.mass > 0.0) {
      std::push_heap(heap_.begin(), heap_.end(), HeapLess{});
    } else {
      heap_.pop_back();
    }
  }

  [[nodiscard]] double total() const noexcept {
    double t = 0.0;
    for (const auto& r : heap_) t += r.mass;
    return t;
  }

 private:
  std::vector<Residual> heap_;
};

void check_marginals(std::span<const Distribution> marginals) {
  if (marginals.size() < 2) throw ValidationError("greedy_coupling: needs at least 2 marginals");
  for (const auto& m : marginals) {
    if (m.size() > std::numeric_limits<std::uint32_t>::max())
      throw ValidationError("greedy_coupling: marginal too large");
  }
}

// Core loop. `cells` is null when only masses are wanted.
std::vector<double> run_greedy(std::span<const Distribution> marginals, std::vector<std::uint32_t>* cells) {
  check_marginals(marginals);
  std::vector<ResidualHeap> heaps;
  heaps.reserve(marginals.size());
  std::size_t total_states = 0;
  for (const auto& m : marginals) {
    heaps.emplace_back(m);
    total_states += m.size();
  }

  std::vector<double> masses;
  masses.reserve(total_states);
  while (true) {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& h : heaps) {
      if (h.empty()) {
        r = 0.0;
        break;
      }
      r = std::min(r, h.top().mass);
    }
    if (r < kResidualTolerance) break;
    masses.push_back(r);
    for (auto& h : heaps) {
      if (cells) cells->push_back(h.top().state);
      h.take(r);
    }
  }

  if (masses.empty()) throw ValidationError("greedy_coupling: marginals carry no mass");
  double dust = 0.0;
  for (const auto& h : heaps) dust += h.total();
  masses.back() += dust / static_cast<double>(heaps.size());
  return masses;
}

CouplingResult finish(std::span<const Distribution> marginals, Coupling coupling) {
  double lower = 0.0;
  for (const auto& m : marginals) lower = std::max(lower, shannon_entropy(m));
  const double h = shannon_entropy(coupling.masses());
  return CouplingResult{std::move(coupling), h, lower, h - lower};
}

}  // namespace

Coupling::Coupling(std::vector<std::size_t> marginal_dims, std::vector<double> masses,
                   std::vector<std::uint32_t> cells)
    : dims_(std::move(marginal_dims)), masses_(std::move(masses)), cells_(std::move(cells)) {
  if (dims_.empty()) throw ValidationError("coupling: no coordinates");
  if (masses_.empty()) throw ValidationError("coupling: no atoms");
  if (cells_.size() != masses_.size() * dims_.size())
    throw ValidationError("coupling: cell count does not match atoms x arity");
  double total = 0.0;
  for (double m : masses_) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("coupling: atom masses must be positive");
    total += m;
  }
  if (std::abs(total - 1.0) > kSumTolerance)
    throw ValidationError("coupling: atom masses sum to " + std::to_string(total));
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    if (cells_[k] >= dims_[k % dims_.size()]) throw ValidationError("coupling: state index out of range");
  }
}

std::vector<std::size_t> Coupling::order_by_mass() const {
  std::vector<std::size_t> idx(masses_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return masses_[a] > masses_[b]; });
  return idx;
}

std::vector<double> Coupling::project(std::size_t coord) const {
  std::vector<double> out(dims_.at(coord), 0.0);
  for (std::size_t a = 0; a < masses_.size(); ++a) out[cell(a)[coord]] += masses_[a];
  return out;
}

CouplingResult greedy_coupling(std::span<const Distribution> marginals) {
  std::vector<std::uint32_t> cells;
  auto masses = run_greedy(marginals, &cells);
  std::vector<std::size_t> dims;
  dims.reserve(marginals.size());
  for (const auto& m : marginals) dims.push_back(m.size());
  return finish(marginals, Coupling(std::move(dims), std::move(masses), std::move(cells)));
}

std::vector<double> greedy_coupling_masses(std::span<const Distribution> marginals) {
  return run_greedy(marginals, nullptr);
}

JointMatrix greedy_joint_matrix(const Distribution& p, const Distribution& q) {
  const Distribution pair[] = {p, q};
  const auto result = greedy_coupling(pair);
  Matrix m(p.size(), q.size());
  const Coupling& c = result.coupling;
  for (std::size_t a = 0; a < c.atom_count(); ++a) m(c.cell(a)[0], c.cell(a)[1]) += c.mass(a);
  return JointMatrix(std::move(m), p.labels(), q.labels());
}

}  // namespace entropic
