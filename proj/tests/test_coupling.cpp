#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entropic/coupling.hpp"
#include "entropic/errors.hpp"
#include "entropic/rng.hpp"
#include "entropic/synth.hpp"

using namespace entropic;

namespace {

struct AtomView {
  double mass;
  std::vector<std::uint32_t> cell;
};

std::vector<AtomView> atoms_of(const Coupling& c) {
  std::vector<AtomView> out;
  for (std::size_t a = 0; a < c.atom_count(); ++a)
    out.push_back({c.mass(a), {c.cell(a).begin(), c.cell(a).end()}});
  return out;
}

std::vector<Distribution> random_marginals(Rng& rng, std::size_t m, std::size_t n_max) {
  std::vector<Distribution> out;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t n = 1 + rng.uniform_index(n_max);
    switch (rng.uniform_index(3)) {
      case 0:
        out.push_back(sample_simplex_uniform(n, rng));
        break;
      case 1:
        out.push_back(sample_low_entropy(n, 4.0, rng));
        break;
      default: {
        // Sparse: some exact zeros.
        auto d = sample_simplex_uniform(n, rng);
        std::vector<double> w(d.masses().begin(), d.masses().end());
        for (std::size_t k = 0; k + 1 < n; k += 2) w[k] = 0.0;
        double t = 0.0;
        for (double x : w) t += x;
        for (double& x : w) x /= t;
        out.emplace_back(std::move(w));
      }
    }
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("coupling");

TEST_CASE("greedy coupling: identical marginals couple diagonally") {
  const std::vector<Distribution> m{Distribution({0.5, 0.5}), Distribution({0.5, 0.5})};
  const auto r = greedy_coupling(m);
  const auto atoms = atoms_of(r.coupling);
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0].mass == 0.5);
  CHECK(atoms[0].cell == std::vector<std::uint32_t>{0, 0});
  CHECK(atoms[1].mass == 0.5);
  CHECK(atoms[1].cell == std::vector<std::uint32_t>{1, 1});
  CHECK(r.entropy_bits == doctest::Approx(1.0));
  CHECK(r.excess_bits == doctest::Approx(0.0));
}

TEST_CASE("greedy coupling: hand trace [.6,.4] x [.5,.5]") {
  const std::vector<Distribution> m{Distribution({0.6, 0.4}), Distribution({0.5, 0.5})};
  const auto r = greedy_coupling(m);
  const auto atoms = atoms_of(r.coupling);
  REQUIRE(atoms.size() == 3);
  CHECK(atoms[0].mass == doctest::Approx(0.5));
  CHECK(atoms[0].cell == std::vector<std::uint32_t>{0, 0});
  CHECK(atoms[1].mass == doctest::Approx(0.4));
  CHECK(atoms[1].cell == std::vector<std::uint32_t>{1, 1});
  CHECK(atoms[2].mass == doctest::Approx(0.1));
  CHECK(atoms[2].cell == std::vector<std::uint32_t>{0, 1});
  CHECK(r.entropy_bits == doctest::Approx(1.3609640474436812).epsilon(1e-12));
  const auto order = r.coupling.order_by_mass();
  CHECK(order == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("greedy coupling: degenerate first marginal") {
  const std::vector<Distribution> m{Distribution({1.0, 0.0}), Distribution({0.3, 0.7})};
  const auto r = greedy_coupling(m);
  const auto atoms = atoms_of(r.coupling);
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0].mass == doctest::Approx(0.7));
  CHECK(atoms[0].cell == std::vector<std::uint32_t>{0, 1});
  CHECK(atoms[1].mass == doctest::Approx(0.3));
  CHECK(atoms[1].cell == std::vector<std::uint32_t>{0, 0});
  CHECK(r.entropy_bits == doctest::Approx(0.88129089923069262).epsilon(1e-12));
}

TEST_CASE("greedy coupling rejects bad input") {
  const std::vector<Distribution> one{Distribution({1.0})};
  CHECK_THROWS_AS((void)greedy_coupling(one), ValidationError);
  CHECK_THROWS_AS((void)greedy_coupling(std::span<const Distribution>{}), ValidationError);
}

TEST_CASE("greedy coupling masses match full coupling") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto m = random_marginals(rng, 2 + rng.uniform_index(4), 20);
    const auto full = greedy_coupling(m);
    const auto masses = greedy_coupling_masses(m);
    CHECK(std::equal(masses.begin(), masses.end(), full.coupling.masses().begin(), full.coupling.masses().end()));
  }
}

TEST_CASE("greedy coupling structural properties") {
  Rng rng(2024);
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t m = 2 + rng.uniform_index(4);
    const auto marginals = random_marginals(rng, m, 64);
    const auto r = greedy_coupling(marginals);
    std::size_t n_max = 0;
    for (const auto& d : marginals) n_max = std::max(n_max, d.size());

    CHECK(r.entropy_bits >= r.lower_bound_bits - 1e-9);
    CHECK(r.entropy_bits <= std::log2(double(m)) + std::log2(double(n_max)) + 1e-9);
    CHECK(r.coupling.atom_count() <= m * (n_max - 1) + 1);
    CHECK(r.excess_bits == doctest::Approx(r.entropy_bits - r.lower_bound_bits));
    for (std::size_t i = 0; i < m; ++i) {
      const auto proj = r.coupling.project(i);
      for (std::size_t s = 0; s < proj.size(); ++s) {
        CHECK(std::abs(proj[s] - marginals[i][s]) <= 1e-8);
        if (marginals[i][s] == 0.0) CHECK(proj[s] == 0.0);
      }
    }
    // Deterministic.
    CHECK(greedy_coupling(marginals).coupling == r.coupling);
  }
}

TEST_CASE("greedy coupling ties break toward the lowest state") {
  const std::vector<Distribution> m{Distribution({0.25, 0.25, 0.25, 0.25}), Distribution({0.25, 0.25, 0.25, 0.25})};
  const auto atoms = atoms_of(greedy_coupling(m).coupling);
  REQUIRE(atoms.size() == 4);
  for (std::uint32_t k = 0; k < 4; ++k) CHECK(atoms[k].cell == std::vector<std::uint32_t>{k, k});
}

TEST_CASE("greedy joint matrix") {
  auto j = greedy_joint_matrix(Distribution({0.6, 0.4}), Distribution({0.5, 0.5}));
  CHECK(j(0, 0) == doctest::Approx(0.5));
  CHECK(j(0, 1) == doctest::Approx(0.1));
  CHECK(j(1, 0) == 0.0);
  CHECK(j(1, 1) == doctest::Approx(0.4));

  j = greedy_joint_matrix(Distribution({1.0, 0.0}), Distribution({1.0, 0.0}));
  CHECK(j(0, 0) == 1.0);
  CHECK(j(0, 1) + j(1, 0) + j(1, 1) == 0.0);

  j = greedy_joint_matrix(Distribution({0.5, 0.5}), Distribution({1.0, 0.0}));
  CHECK(j(0, 0) == 0.5);
  CHECK(j(1, 0) == 0.5);
  CHECK(j(0, 1) + j(1, 1) == 0.0);

  j = greedy_joint_matrix(Distribution({0.2, 0.3, 0.5}), Distribution({0.9, 0.1}));
  CHECK(j.n_rows() == 3);
  CHECK(j.n_cols() == 2);
  const auto rs = j.cells().row_sums(), cs = j.cells().col_sums();
  CHECK(rs[0] == doctest::Approx(0.2));
  CHECK(rs[2] == doctest::Approx(0.5));
  CHECK(cs[0] == doctest::Approx(0.9));
}

TEST_CASE("verify local optimum") {
  SUBCASE("three-edge tree") {
    const auto v = verify_local_optimum(JointMatrix::from_rows({{0.5, 0.1}, {0.0, 0.4}}));
    REQUIRE(v.acyclic);
    REQUIRE(v.mask);
    CHECK(v.mask->u[0] == doctest::Approx(1.0));
    CHECK(v.mask->u[1] == doctest::Approx(4.0));
    CHECK(v.mask->v[0] == doctest::Approx(0.5));
    CHECK(v.mask->v[1] == doctest::Approx(0.1));
    CHECK(v.mask->max_relative_error <= 1e-9);
    CHECK(v.witness_cycle.empty());
  }
  SUBCASE("full support 2x2 is a 4-cycle") {
    const auto v = verify_local_optimum(JointMatrix::from_rows({{0.25, 0.25}, {0.25, 0.25}}));
    CHECK_FALSE(v.acyclic);
    CHECK_FALSE(v.mask);
    using C = std::pair<std::size_t, std::size_t>;
    CHECK(v.witness_cycle == std::vector<C>{{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  }
  SUBCASE("single cell") {
    const auto v = verify_local_optimum(JointMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
    REQUIRE(v.acyclic);
    CHECK(v.mask->u[0] * v.mask->v[0] == 1.0);
  }
  SUBCASE("two components") {
    const auto v = verify_local_optimum(JointMatrix::from_rows({{0.3, 0.0, 0.0}, {0.0, 0.2, 0.1}, {0.0, 0.0, 0.4}}));
    REQUIRE(v.acyclic);
    CHECK(v.mask->max_relative_error <= 1e-12);
  }
  SUBCASE("larger cycle witness is a genuine cycle") {
    const auto v = verify_local_optimum(
        JointMatrix::from_rows({{0.1, 0.1, 0.0}, {0.0, 0.1, 0.2}, {0.3, 0.0, 0.2}}));
    REQUIRE_FALSE(v.acyclic);
    const auto& c = v.witness_cycle;
    REQUIRE(c.size() == 6);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& a = c[i];
      const auto& b = c[(i + 1) % c.size()];
      CHECK((a.first == b.first) != (a.second == b.second));
    }
  }
}

TEST_CASE("greedy joint matrices are local optima") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = random_marginals(rng, 2, 32);
    const auto v = verify_local_optimum(greedy_joint_matrix(m[0], m[1]));
    CHECK(v.acyclic);
    REQUIRE(v.mask);
    CHECK(v.mask->max_relative_error <= 1e-9);
  }
}

TEST_CASE("brute force oracle") {
  auto r = brute_force_min_coupling(Distribution({0.6, 0.4}), Distribution({0.5, 0.5}));
  CHECK(r.entropy_bits == doctest::Approx(1.3609640474436812).epsilon(1e-12));
  r = brute_force_min_coupling(Distribution({0.5, 0.5}), Distribution({0.5, 0.5}));
  CHECK(r.entropy_bits == doctest::Approx(1.0));
  r = brute_force_min_coupling(Distribution({1.0, 0.0}), Distribution({0.2, 0.3, 0.5}));
  CHECK(r.entropy_bits == doctest::Approx(shannon_entropy(Distribution({0.2, 0.3, 0.5}))));
  CHECK_THROWS_AS((void)brute_force_min_coupling(Distribution::uniform(5), Distribution::uniform(5)),
                  ValidationError);
  CHECK_NOTHROW((void)brute_force_min_coupling(Distribution::uniform(4), Distribution::uniform(5)));
}

TEST_CASE("brute force never beats a feasible coupling and matches 2x2 greedy") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = sample_simplex_uniform(2 + rng.uniform_index(3), rng);
    const auto q = sample_simplex_uniform(2 + rng.uniform_index(3), rng);
    const std::vector<Distribution> pq{p, q};
    const auto g = greedy_coupling(pq);
    const auto b = brute_force_min_coupling(p, q);
    CHECK(b.entropy_bits <= g.entropy_bits + 1e-9);
    CHECK(b.entropy_bits >= b.lower_bound_bits - 1e-9);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto proj = b.coupling.project(i);
      for (std::size_t s = 0; s < proj.size(); ++s) CHECK(std::abs(proj[s] - pq[i][s]) <= 1e-9);
    }
    if (p.size() == 2 && q.size() == 2) CHECK(g.entropy_bits == doctest::Approx(b.entropy_bits).epsilon(1e-9));
  }
}

TEST_CASE("coupling text format round trips bit-exactly") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_marginals(rng, 2 + rng.uniform_index(3), 12);
    const auto c = greedy_coupling(m).coupling;
    std::stringstream ss;
    write_coupling(ss, c);
    CHECK(read_coupling(ss) == c);
  }
}

TEST_CASE("coupling text format layout and errors") {
  const std::vector<Distribution> m{Distribution({0.5, 0.5}), Distribution({0.5, 0.5})};
  std::stringstream ss;
  write_coupling(ss, greedy_coupling(m).coupling);
  CHECK(ss.str() == "marginal_dims\t2,2\n0.5\t0,0\n0.5\t1,1\n");

  std::istringstream bad_header("dims 2,2\n0.5\t0,0\n");
  CHECK_THROWS_AS((void)read_coupling(bad_header), IoError);
  std::istringstream bad_mass("marginal_dims\t2,2\nhalf\t0,0\n");
  CHECK_THROWS_AS((void)read_coupling(bad_mass), IoError);
  std::istringstream bad_arity("marginal_dims\t2,2\n1\t0\n");
  CHECK_THROWS_AS((void)read_coupling(bad_arity), IoError);
  std::istringstream bad_range("marginal_dims\t2,2\n1\t0,2\n");
  CHECK_THROWS_AS((void)read_coupling(bad_range), ValidationError);
}

TEST_SUITE_END();
