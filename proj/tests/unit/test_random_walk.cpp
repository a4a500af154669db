#include <doctest.h>

#include <cmath>

#include "ergolab/model_checks.hpp"
#include "ergolab/random_walk.hpp"

using namespace ergolab;

namespace {

using Lattice = IntegerLattice::Element;

StepDistribution<IntegerLattice> lattice_nu(std::vector<Lattice> support, std::vector<double> w) {
  return {std::move(support), std::move(w), false};
}

StepDistribution<IntegerLattice> skewed_plane() {
  return lattice_nu({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6});
}

std::map<Word, double> prefix_mass(const EmpiricalBoundaryMeasure& mu, std::size_t len) {
  std::map<Word, double> out;
  for (const auto& [key, f] : mu.fine)
    if (f.word_rep.size() >= len) out[Word(f.word_rep.begin(), f.word_rep.begin() + static_cast<std::ptrdiff_t>(len))] += f.mass;
  return out;
}

}  // namespace

TEST_SUITE("walk") {
  TEST_CASE("delta walk on the line") {
    IntegerLattice z(1);
    auto w = sample_walk(z, lattice_nu({{1}}, {1.0}), 5, 1);
    for (std::size_t k = 0; k < 5; ++k) CHECK(w.lengths[k] == static_cast<double>(k + 1));
  }

  TEST_CASE("free group drift") {
    FreeGroup f(2);
    auto d = drift(f, uniform_generators(f), 100000, 4, 3);
    CHECK(std::abs(d.estimate.terminal - 0.5) <= 0.01);
    CHECK(d.half_gap == 0.0);
  }

  TEST_CASE("lattice drift is the l1 norm of the mean") {
    IntegerLattice z(2);
    auto d = drift(z, skewed_plane(), 100000, 4, 5);
    CHECK(std::abs(d.estimate.terminal - 1.0 / 3.0) <= 0.01);
  }

  TEST_CASE("identity steps have zero drift") {
    FreeGroup f(2);
    StepDistribution<FreeGroup> nu{{Word{}}, {1.0}, true};
    auto d = drift(f, nu, 1000, 2, 1);
    CHECK(d.estimate.terminal == 0.0);
  }

  TEST_CASE("invalid step distributions") {
    IntegerLattice z(1);
    CHECK_THROWS_AS(sample_walk(z, lattice_nu({{1}, {-1}}, {0.5, 0.6}), 5, 1), Error);
    CHECK_THROWS_AS(sample_walk(z, lattice_nu({{1, 0}}, {1.0}), 5, 1), Error);
    CHECK(!lattice_nu({{1}}, {1.0}).generates(z));
    CHECK(lattice_nu({{1}, {-1}}, {0.5, 0.5}).generates(z));
  }

  TEST_CASE("free group boundary measure") {
    FreeGroup f(2);
    auto mu = empirical_stationary_measure(f, uniform_generators(f), 20000, 20, 11);
    CHECK(mu.positive_drift);
    double total = 0.0;
    for (const auto& [key, p] : mu.cells) total += p;
    CHECK(std::abs(total - 1.0) <= 1e-9);
    auto first = prefix_mass(mu, 1);
    REQUIRE(first.size() == 4);
    for (const auto& [w, p] : first) CHECK(std::abs(p - 0.25) <= 0.01);
    auto second = prefix_mass(mu, 2);
    CHECK(std::abs(second[Word{1, 1}] - 1.0 / 12.0) <= 0.01);
    CHECK(second.count(Word{1, -1}) == 0);
  }

  TEST_CASE("delta walk boundary measure") {
    IntegerLattice z(1);
    auto mu = empirical_stationary_measure(z, lattice_nu({{1}}, {1.0}), 1000, 1, 1);
    CHECK(mu.cells.at("4") == doctest::Approx(1.0 - 4.0 / 1000.0));
  }

  TEST_CASE("stationarity residual decreases") {
    FreeGroup f(2);
    auto a = empirical_stationary_measure(f, uniform_generators(f), 5000, 20, 13);
    auto b = empirical_stationary_measure(f, uniform_generators(f), 10000, 20, 13);
    CHECK(b.stationarity_residual < a.stationarity_residual);
  }

  TEST_CASE("drift against the boundary average on the free group") {
    FreeGroup f(2);
    const auto nu = uniform_generators(f);
    auto lhs = drift(f, nu, 100000, 4, 3);
    auto mu = empirical_stationary_measure(f, nu, 20000, 20, 11);
    auto fk = fk_check(f, nu, mu, lhs, 10000, 7);
    CHECK(fk.pass);
    CHECK(std::abs(fk.rhs - 0.5) <= 0.02);
  }

  TEST_CASE("drift against the boundary average for a delta walk") {
    IntegerLattice z(1);
    const auto nu = lattice_nu({{1}}, {1.0});
    auto lhs = drift(z, nu, 1000, 1, 1);
    auto mu = empirical_stationary_measure(z, nu, 1000, 1, 1);
    auto fk = fk_check(z, nu, mu, lhs, 100, 7);
    CHECK(lhs.estimate.terminal == 1.0);
    CHECK(fk.rhs == 1.0);
    CHECK(fk.difference == 0.0);
    CHECK(fk.pass);
  }

  TEST_CASE("characters") {
    IntegerLattice line(1);
    auto biased = character_drift(line, lattice_nu({{1}, {-1}}, {0.7, 0.3}));
    CHECK(biased.character.c(0) == 1.0);
    CHECK(biased.integral == doctest::Approx(0.4).epsilon(1e-15));
    IntegerLattice plane(2);
    CHECK(character_drift(plane, uniform_generators(plane)).integral == 0.0);
    Heisenberg h(6);
    CHECK(character_drift(h, uniform_generators(h)).integral == 0.0);
    FreeGroup f(2);
    CHECK_THROWS_AS(character_drift(f, uniform_generators(f)), Error);
  }

  TEST_CASE("characters are Lipschitz homomorphisms") {
    Heisenberg h(10);
    auto t = character_drift(h, uniform_generators(h)).character;
    rng::Stream s(3);
    const auto gens = h.generators();
    auto word = [&](std::size_t len) {
      auto x = h.identity();
      for (std::size_t i = 0; i < len; ++i) h.right_multiply(x, gens[s.below(gens.size())]);
      return x;
    };
    for (int c = 0; c < 200; ++c) {
      const auto x = word(5), y = word(5);
      CHECK(t(h, h.multiply(x, y)) == t(h, x) + t(h, y));
      CHECK(std::abs(t(h, x)) <= h.length(x).lo);
    }
  }

  TEST_CASE("non-centered lattice walk") {
    IntegerLattice z(2);
    const auto nu = skewed_plane();
    auto ch = character_drift(z, nu);
    CHECK(ch.integral == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    auto d = drift(z, nu, 100000, 8, 9);
    CHECK(std::abs(d.estimate.terminal - ch.integral) <= 3.0 * d.error_bar);
    CHECK(ch.integral - 3.0 * d.error_bar > 0.0);
  }

  TEST_CASE("harmonic functions") {
    FreeGroup f(2);
    const auto nu = uniform_generators(f);
    rng::Stream s(5);
    std::vector<Word> samples;
    for (int c = 0; c < 500; ++c) samples.push_back(random_word(2, 12, s));
    CHECK(harmonicity_residual<FreeGroup>(f, nu, [](const Word&) { return 0.3; }, samples) == 0.0);
    auto first_a = [](const Word& g) { return first_letter_probability(2, 1, g); };
    CHECK(harmonicity_residual<FreeGroup>(f, nu, first_a, samples) <= 1e-9);
    CHECK(first_a(Word{1, 1, 1}) > 0.9);
    CHECK(first_a(Word{2, 2, 2}) < 0.01);
    IntegerLattice z(1);
    std::vector<Lattice> points;
    for (std::int64_t x = -20; x <= 20; ++x) points.push_back({x});
    auto coordinate = [](const Lattice& g) { return static_cast<double>(g[0]); };
    CHECK(harmonicity_residual<IntegerLattice>(z, uniform_generators(z), coordinate, points) == 0.0);
  }

  TEST_CASE("Heisenberg growth is subexponential on the exact ball") {
    Heisenberg h(14);
    CHECK(h.ball_count(1) == 5);
    double prev = INFINITY;
    for (int n = 1; n <= 12; ++n) {
      const double rate = std::log(static_cast<double>(h.ball_count(n))) / n;
      CHECK(rate < prev);
      prev = rate;
    }
  }

  TEST_CASE("Heisenberg centered walk") {
    Heisenberg h(14);
    auto d = drift(h, uniform_generators(h), 10000, 8, 21);
    CHECK(d.estimate.terminal <= 0.05);
  }

  TEST_CASE("word metric is left invariant") {
    FreeGroup f(2);
    rng::Stream s(8);
    for (int c = 0; c < 200; ++c) {
      const Word g = random_word(2, 8, s), x = random_word(2, 8, s), y = random_word(2, 8, s);
      const auto d = f.length(f.multiply(f.inverse(y), x)).lo;
      const auto dg = f.length(f.multiply(f.inverse(f.multiply(g, y)), f.multiply(g, x))).lo;
      CHECK(d == dg);
    }
  }

  TEST_CASE("boundary action and the Busemann cocycle") {
    FreeGroupTree tree(2);
    const End xi{{1, 2}, {-1}};
    const End moved = tree.act_boundary(Word{-2, -1}, xi);
    CHECK(moved.letter(0) == -1);
    CHECK(moved.letter(5) == -1);
    CHECK(tree.chart_distance(tree.act_boundary(Word{}, xi), xi) == 0.0);
    auto r = busemann_cocycle_check(tree, 2000, 4);
    CHECK(r.pass);
  }
}
