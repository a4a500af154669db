#include <doctest.h>

#include <cmath>

#include "ergolab/driving.hpp"
#include "ergolab/error.hpp"
#include "ergolab/stats.hpp"

using namespace ergolab;

TEST_SUITE("driving") {
  TEST_CASE("rotation with half turn alternates") {
    auto p = sample_path(DrivingSystem::rotation(0.5, 0.0), 4);
    CHECK(p.data() == std::vector<double>{0.0, 0.5, 0.0, 0.5});
  }

  TEST_CASE("constant iid stream") {
    auto p = sample_path(DrivingSystem::iid({ScalarDist::constant(2.5)}, 3), 3);
    CHECK(p.data() == std::vector<double>{2.5, 2.5, 2.5});
  }

  TEST_CASE("deterministic two-state chain") {
    Eigen::MatrixXd t(2, 2);
    t << 0, 1, 1, 0;
    auto p = sample_path(DrivingSystem::markov(t, Eigen::Vector2d(1, 0), 9), 4);
    CHECK(p.data() == std::vector<double>{0, 1, 0, 1});
  }

  TEST_CASE("shift drops a prefix") {
    SymbolPath p(1, {1, 2, 3});
    CHECK(shift(p, 1).data() == std::vector<double>{2, 3});
    CHECK(shift(p, 0) == p);
    CHECK(shift(p, 3).size() == 0);
    CHECK_THROWS_AS(shift(p, 4), Error);
  }

  TEST_CASE("invalid parameters are rejected before sampling") {
    CHECK_THROWS_AS(sample_path(DrivingSystem::rotation(1.0, 0.0), 3), Error);
    CHECK_THROWS_AS(sample_path(DrivingSystem::rotation(0.0, 0.0), 3), Error);
    Eigen::MatrixXd t(2, 2);
    t << 0.5, 0.6, 1, 0;
    CHECK_THROWS_AS(sample_path(DrivingSystem::markov(t, Eigen::Vector2d(1, 0), 1), 3), Error);
    CHECK_THROWS_AS(sample_path(DrivingSystem::iid({ScalarDist::uniform(1, 0)}, 1), 3), Error);
  }

  TEST_CASE("streams are reproducible and shift compatible") {
    auto sys = DrivingSystem::iid({ScalarDist::normal(0, 1), ScalarDist::uniform(0, 1)}, 42);
    CHECK(sample_path(sys, 100) == sample_path(sys, 100));
    CHECK(shift(sample_path(sys, 120), 20) == sample_path(sys, 100, 20));
    sys.seed = 43;
    CHECK_FALSE(sample_path(sys, 100) == sample_path(DrivingSystem::iid({ScalarDist::normal(0, 1), ScalarDist::uniform(0, 1)}, 42), 100));
    Eigen::MatrixXd t(2, 2);
    t << 0.9, 0.1, 0.3, 0.7;
    auto mk = DrivingSystem::markov(t, Eigen::Vector2d(0.5, 0.5), 5);
    CHECK(sample_path(mk, 500) == sample_path(mk, 500));
  }

  TEST_CASE("rotation angle stored as given") {
    auto sys = DrivingSystem::rotation(0.6180339887498949, 0.25);
    CHECK(sys.theta == 0.6180339887498949);
    auto p = sample_path(sys, 5, 3);
    CHECK(p.value(0) == doctest::Approx(std::fmod(0.25 + 3 * 0.6180339887498949, 1.0)).epsilon(1e-15));
  }

  TEST_CASE("iid halves agree statistically") {
    auto sys = DrivingSystem::iid({ScalarDist::normal(1, 2)}, 7);
    auto p = sample_path(sys, 100000);
    const auto& d = p.data();
    auto a = stats::mean_se(std::span<const double>(d.data(), 50000));
    auto b = stats::mean_se(std::span<const double>(d.data() + 50000, 50000));
    CHECK(std::abs(a.mean - b.mean) < 5 * std::hypot(a.se, b.se));
  }

  TEST_CASE("symmetric pareto tail") {
    auto f = ScalarDist::sym_pareto(0.7);
    std::size_t above = 0;
    const std::size_t n = 200000;
    for (std::size_t i = 0; i < n; ++i) above += std::abs(f.sample(3, i, 0)) > 10.0;
    const double p = static_cast<double>(above) / n, expected = std::pow(10.0, -0.7);
    CHECK(std::abs(p - expected) < 5 * std::sqrt(expected * (1 - expected) / n));
  }
}
