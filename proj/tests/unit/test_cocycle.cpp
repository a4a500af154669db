#include <doctest.h>

#include <cmath>

#include "ergolab/cocycle.hpp"
#include "ergolab/step_rules.hpp"

using namespace ergolab;

namespace {

std::vector<Trajectory<Euclidean<double>>> line_ensemble(const ScalarDist& f, std::size_t n,
                                                         std::size_t trials, std::uint64_t seed) {
  std::vector<Trajectory<Euclidean<double>>> out;
  for (std::size_t t = 0; t < trials; ++t) {
    auto path = sample_path(DrivingSystem::iid({f}, seed + t), n);
    out.push_back(compose_trajectory(Euclidean<double>(1), path, translation_rule(1)));
  }
  return out;
}

}  // namespace

TEST_SUITE("cocycle") {
  TEST_CASE("constant unit steps") {
    auto tr = compose_trajectory(Euclidean<double>(1),
                                 sample_path(DrivingSystem::iid({ScalarDist::constant(1)}, 1), 5),
                                 translation_rule(1));
    for (std::size_t k = 1; k <= 5; ++k) CHECK(tr.distance(k) == static_cast<double>(k));
  }

  TEST_CASE("alternating steps cancel") {
    auto path = sample_path(DrivingSystem::rotation(0.5, 0.0), 4);
    auto rule = [](const Symbol& s) { return Eigen::VectorXd::Constant(1, s(0) < 0.25 ? 1.0 : -1.0); };
    auto tr = compose_trajectory(Euclidean<double>(1), path, rule);
    CHECK(tr.distances == std::vector<double>{1, 0, 1, 0});
  }

  TEST_CASE("step rule failure names the index") {
    SymbolPath p(1, {0, 1, 7});
    try {
      compose_trajectory(FreeGroupTree(2), p, generator_rule(2));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("index 2") != std::string::npos);
    }
  }

  TEST_CASE("composition order is right multiplication") {
    FreeGroupTree t(2);
    SymbolPath p(1, {0, 2, 1});  // a, b, A
    auto tr = compose_trajectory(t, p, generator_rule(2), {{1, 2, 3}});
    CHECK(format_word(tr.terminal) == "abA");
    CHECK(format_word(tr.point(2)) == "ab");
  }

  TEST_CASE("free group simple random walk drift") {
    auto path = sample_path(DrivingSystem::iid({ScalarDist::choice({0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25})}, 3), 100000);
    auto tr = compose_trajectory(FreeGroupTree(2), path, generator_rule(2));
    CHECK(std::abs(tr.distance(100000) / 1e5 - 0.5) < 0.01);
  }

  TEST_CASE("drift of a constant translation is exact") {
    Eigen::Vector3d v(1, 2, 2);
    auto sys = DrivingSystem::iid({ScalarDist::constant(1), ScalarDist::constant(2), ScalarDist::constant(2)}, 1);
    std::vector<Trajectory<Euclidean<double>>> ens{compose_trajectory(Euclidean<double>(3), sample_path(sys, 50), translation_rule(3))};
    auto d = estimate_drift(std::span<const Trajectory<Euclidean<double>>>(ens), 50);
    CHECK(d.alpha == 3.0);
    CHECK(d.argmin == 1);
  }

  TEST_CASE("deterministic n + sqrt n") {
    auto s = deterministic_cocycle([](std::size_t n) { return n + std::sqrt(static_cast<double>(n)); }, 10000);
    std::vector<ScalarCocycle> ens{s};
    auto d = estimate_drift(std::span<const ScalarCocycle>(ens), 10000);
    CHECK(d.alpha <= 1.01);
    CHECK(d.alpha > 1.0);
    CHECK(d.argmin == 10000);
  }

  TEST_CASE("centered walk has small drift") {
    auto ens = line_ensemble(ScalarDist::choice({-1, 1}, {0.5, 0.5}), 10000, 100, 100);
    auto d = estimate_drift(std::span<const Trajectory<Euclidean<double>>>(ens), 10000);
    CHECK(d.alpha <= 0.02);
    CHECK(d.alpha >= 0.0);
    CHECK(d.terminal == doctest::Approx(std::sqrt(2.0 / (std::numbers::pi * 1e4))).epsilon(0.25));
  }

  TEST_CASE("errors of the estimator") {
    std::vector<ScalarCocycle> none;
    CHECK_THROWS_AS(estimate_drift(std::span<const ScalarCocycle>(none), 3), Error);
    std::vector<ScalarCocycle> one{additive_cocycle({1, 2})};
    CHECK_THROWS_AS(estimate_drift(std::span<const ScalarCocycle>(one), 3), Error);
  }

  TEST_CASE("record times") {
    auto lin = deterministic_cocycle([](std::size_t n) { return static_cast<double>(n); }, 50);
    auto r = record_times(lin, 1.0, {0.1, 1, 50});
    CHECK(r.size() == 50);
    auto neg = deterministic_cocycle([](std::size_t n) { return -static_cast<double>(n); }, 50);
    CHECK(record_times(neg, -1.0, {0.1, 1, 50}).size() == 50);
  }

  TEST_CASE("record times of a centered walk") {
    auto path = sample_path(DrivingSystem::iid({ScalarDist::choice({-1, 1}, {0.5, 0.5})}, 5), 10000);
    TrajectoryOptions o;
    o.dense = true;
    auto tr = compose_trajectory(Euclidean<double>(1), path, translation_rule(1), o);
    auto s = trajectory_cocycle(tr);
    auto r = record_times(s, 0.0, {0.2, 10, 10000});
    REQUIRE_FALSE(r.empty());
    // Brute-force recheck of every reported instant.
    double worst = INFINITY;
    for (std::size_t n : r)
      for (std::size_t k = 10; k <= n; ++k)
        worst = std::min(worst, s.at(n) - s.at_shift(k, n - k) + 0.2 * static_cast<double>(k));
    CHECK(worst >= 0.0);
  }

  TEST_CASE("subadditivity") {
    auto path = sample_path(DrivingSystem::iid({ScalarDist::normal(0.3, 1), ScalarDist::normal(0, 1)}, 9), 2000);
    TrajectoryOptions o;
    o.dense = true;
    auto tr = compose_trajectory(Euclidean<double>(2), path, translation_rule(2), o);
    CHECK(check_subadditivity(trajectory_cocycle(tr), 500).pass);
    auto sq = deterministic_cocycle([](std::size_t n) { return static_cast<double>(n * n); }, 100);
    auto bad = check_subadditivity(sq, 100);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_violation > 0.0);
    auto root = deterministic_cocycle([](std::size_t n) { return std::sqrt(static_cast<double>(n)); }, 100);
    CHECK(check_subadditivity(root, 200).pass);
  }

  TEST_CASE("tree and cone trajectories are subadditive") {
    auto path = sample_path(DrivingSystem::iid({ScalarDist::choice({0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25})}, 4), 400);
    TrajectoryOptions o;
    o.dense = true;
    CHECK(check_subadditivity(trajectory_cocycle(compose_trajectory(FreeGroupTree(2), path, generator_rule(2), o)), 300).pass);
  }

  TEST_CASE("kingman convergence on the line") {
    auto ens = line_ensemble(ScalarDist::normal(0.7, 1.0), 10000, 20, 300);
    auto d = estimate_drift(std::span<const Trajectory<Euclidean<double>>>(ens), 10000);
    CHECK(std::abs(d.terminal - d.alpha) <= 5 * std::hypot(d.terminal_se, d.alpha_se));
  }
}
