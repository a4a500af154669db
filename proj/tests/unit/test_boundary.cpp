#include <doctest.h>

#include <cmath>

#include "ergolab/boundary.hpp"
#include "ergolab/oseledets.hpp"
#include "ergolab/step_rules.hpp"

using namespace ergolab;

namespace {

SymbolPath constant_path(std::vector<double> v, std::size_t n) {
  std::vector<ScalarDist> c;
  for (double x : v) c.push_back(ScalarDist::constant(x));
  return sample_path(DrivingSystem::iid(c, 1), n);
}

TrajectoryOptions every(std::size_t stride, std::size_t n) {
  TrajectoryOptions o;
  for (std::size_t k = stride; k <= n; k += stride) o.checkpoints.push_back(k);
  return o;
}

}  // namespace

TEST_SUITE("boundary") {
  TEST_CASE("direction of a constant translation") {
    auto tr = compose_trajectory(Euclidean<double>(2), constant_path({1, 0}, 10), translation_rule(2));
    auto est = estimate_direction(tr);
    CHECK(est.xi.u == Eigen::VectorXd(Eigen::Vector2d(1, 0)));
    CHECK(est.residual == 0.0);
  }

  TEST_CASE("direction of a constant cone isometry") {
    Eigen::MatrixXd g = Eigen::Vector2d(2, 1).asDiagonal();
    auto tr = compose_trajectory(PosdefCone<double>(2), constant_path({0}, 50), posdef_rule(constant_cocycle(g)));
    auto est = estimate_direction(tr);
    Eigen::MatrixXd h = Eigen::Vector2d(1, 0).asDiagonal();
    CHECK((est.xi.H - h).norm() < 1e-12);
    CHECK((ray_matrix(tr) - Eigen::MatrixXd(Eigen::Vector2d(std::log(2.0), 0).asDiagonal())).norm() < 1e-12);
  }

  TEST_CASE("orthogonal isometry is sublinear") {
    Eigen::Matrix2d r;
    r << 0, -1, 1, 0;
    auto tr = compose_trajectory(PosdefCone<double>(2), constant_path({0}, 20), posdef_rule(constant_cocycle(r)));
    CHECK_THROWS_WITH_AS(estimate_direction(tr), doctest::Contains("sublinear"), Error);
    CHECK_THROWS_AS(ray_matrix(tr), Error);
  }

  TEST_CASE("tree direction is prefix stable") {
    auto path = sample_path(DrivingSystem::iid({ScalarDist::choice({0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25})}, 12), 20000);
    auto tr = compose_trajectory(FreeGroupTree(2), path, generator_rule(2), {{10000, 20000}});
    auto s = direction_stability(tr, 10000);
    CHECK(s.stable);
    CHECK(estimate_direction(tr).xi.prefix == tr.terminal);
  }

  TEST_CASE("main theorem on the line, both charts") {
    auto tr = compose_trajectory(Euclidean<double>(1), constant_path({1}, 100), translation_rule(1), every(10, 100));
    Euclidean<double> e(1);
    auto good = verify_main_theorem(tr, e.boundary(Eigen::VectorXd::Constant(1, 1.0)));
    CHECK(good.pass);
    for (std::size_t i = 0; i < good.a.size(); ++i) {
      CHECK(good.a[i] == 1.0);
      CHECK(good.b[i] == 1.0);
    }
    auto bad = verify_main_theorem(tr, e.boundary(Eigen::VectorXd::Constant(1, -1.0)));
    CHECK_FALSE(bad.pass);
    CHECK(bad.a.back() == -1.0);
  }

  TEST_CASE("main theorem on a gauged line") {
    auto path = sample_path(DrivingSystem::iid({ScalarDist::normal(0.5, 1)}, 3), 10000);
    auto tr = compose_trajectory(GaugedLine(GaugeFunction::power(0.5)), path, line_rule(), every(1000, 10000));
    auto r = verify_main_theorem(tr, GaugedLine::Boundary{});
    CHECK(r.a.back() == 0.0);
    CHECK(r.pass);
    CHECK_THROWS_AS(estimate_direction(tr), Error);
  }

  TEST_CASE("ray error of an exact ray") {
    auto tr = compose_trajectory(Euclidean<double>(3), constant_path({1, 2, 2}, 50), translation_rule(3), every(5, 50));
    Euclidean<double> e(3);
    auto r = ray_error(tr, e.boundary(Eigen::Vector3d(1, 2, 2) / 3.0), 3.0);
    for (double x : r.error) CHECK(x < 1e-14);
  }

  TEST_CASE("ray error on the line follows the CLT") {
    auto path = sample_path(DrivingSystem::iid({ScalarDist::normal(1, 1)}, 8), 20000);
    auto tr = compose_trajectory(Euclidean<double>(1), path, translation_rule(1), every(500, 20000));
    auto xi = estimate_direction(tr).xi;
    auto r = ray_error(tr, xi, tr.distance(20000) / 20000.0, 10000);
    CHECK(r.error.back() < 0.05);
    CHECK(r.bound_ok);
    CHECK(r.slope < 0.0);
  }

  TEST_CASE("disk ray error with random axes") {
    auto sys = DrivingSystem::iid({ScalarDist::uniform(0.5, 1.5), ScalarDist::uniform(0, 1)}, 31);
    auto path = sample_path(sys, 20000);
    PoincareDisk<BigReal> disk;
    auto ff = compose_far_field(disk, path, disk_translation_rule<BigReal>(), every(500, 20000));
    PrecisionScope scope(ff.bits);
    const auto& tr = ff.trajectory;
    auto xi = estimate_direction(tr).xi;
    const double alpha = tr.distance(20000) / 20000.0;
    CHECK(alpha > 0.1);
    auto r = ray_error(tr, xi, alpha, 10000);
    CHECK(r.error.back() < 0.1);
    CHECK(r.slope < 0.0);
    auto m = verify_main_theorem(tr, xi, 0.0, 10000);
    CHECK(m.pass);
    auto wrong = verify_main_theorem(tr, disk.far_boundary(xi), 0.0, 10000);
    CHECK(wrong.residual > m.residual);
  }

  TEST_CASE("birkhoff sign selection") {
    auto up = compose_trajectory(Euclidean<double>(1), sample_path(DrivingSystem::iid({ScalarDist::uniform(0, 1)}, 4), 100000), translation_rule(1));
    auto b = birkhoff_from_boundary(up);
    CHECK(b.sign == 1);
    CHECK(std::abs(b.value - 0.5) < 0.01);
    auto down = compose_trajectory(Euclidean<double>(1), constant_path({-2}, 100), translation_rule(1));
    CHECK(birkhoff_from_boundary(down).value == -2.0);
    auto centered = compose_trajectory(Euclidean<double>(1), sample_path(DrivingSystem::iid({ScalarDist::choice({-1, 1}, {0.5, 0.5})}, 4), 100000), translation_rule(1));
    auto c = birkhoff_from_boundary(centered);
    CHECK(c.sublinear);
    CHECK(c.sign == 0);
  }
}
