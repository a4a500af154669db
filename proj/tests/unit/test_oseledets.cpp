#include <doctest.h>

#include <cmath>

#include "ergolab/boundary.hpp"
#include "ergolab/oseledets.hpp"
#include "ergolab/rng.hpp"

using namespace ergolab;

namespace {

Eigen::MatrixXd m2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

SymbolPath turns(std::size_t n, std::uint64_t seed) {
  return sample_path(DrivingSystem::iid({ScalarDist::uniform(0, 1)}, seed), n);
}

SymbolPath labels(std::size_t n, std::uint64_t seed) {
  return sample_path(DrivingSystem::iid({ScalarDist::choice({0, 1}, {0.5, 0.5})}, seed), n);
}

MatrixCocycle two_shears() { return table_cocycle({m2(2, 1, 1, 1), m2(1, 1, 1, 2)}); }

}  // namespace

TEST_SUITE("oseledets") {
  TEST_CASE("cartan examples") {
    auto id = cartan(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(id.delta(0) == 1.0);
    CHECK(id.delta(1) == 1.0);
    auto d = cartan(m2(3, 0, 0, 2));
    CHECK(d.delta(0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(d.delta(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(std::abs(d.L(0, 0)) - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(d.K(1, 1)) - 1.0) < 1e-15);
    auto p = cartan(m2(0, 2, 1, 0));
    CHECK(p.delta(0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p.delta(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(cartan(m2(1, 2, 2, 4)), Error);
  }

  TEST_CASE("cartan reconstruction on random matrices") {
    rng::Stream s(11);
    double recon = 0.0, ortho = 0.0;
    bool sorted = true;
    for (int c = 0; c < 1000; ++c) {
      const Eigen::Index d = 2 + static_cast<Eigen::Index>(s.below(4));
      Eigen::MatrixXd a(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = s.normal();
      auto t = cartan(a);
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
      recon = std::max(recon, (t.L * t.delta.asDiagonal() * t.K - a).norm() / a.norm());
      ortho = std::max({ortho, (t.L.transpose() * t.L - id).norm(), (t.K.transpose() * t.K - id).norm()});
      for (Eigen::Index i = 1; i < d; ++i) sorted = sorted && t.delta(i - 1) >= t.delta(i);
    }
    CHECK(recon <= 1e-9);
    CHECK(ortho <= 1e-10);
    CHECK(sorted);
  }

  TEST_CASE("constant diagonal spectrum") {
    auto sp = lyapunov_spectrum(constant_cocycle(m2(2, 0, 0, 0.5)), labels(1000, 1));
    CHECK(std::abs(sp.mu(0) - std::log(2.0)) <= 1e-9);
    CHECK(std::abs(sp.mu(1) + std::log(2.0)) <= 1e-9);
    REQUIRE(sp.lambda.size() == 2);
    CHECK(sp.lambda[0] > sp.lambda[1]);
    REQUIRE(sp.flag.size() == 2);
    CHECK(sp.flag[0].cols() == 2);
    CHECK(sp.flag[1].cols() == 1);
    CHECK(std::abs(std::abs(sp.flag[1](1, 0)) - 1.0) <= 1e-12);
  }

  TEST_CASE("rotation has one zero exponent of multiplicity two") {
    const double c = std::cos(0.7), s = std::sin(0.7);
    auto sp = lyapunov_spectrum(constant_cocycle(m2(c, -s, s, c)), labels(1000, 1));
    CHECK(std::abs(sp.mu(0)) <= 1e-12);
    CHECK(std::abs(sp.mu(1)) <= 1e-12);
    REQUIRE(sp.lambda.size() == 1);
    CHECK(sp.multiplicity[0] == 2);
  }

  TEST_CASE("random shears against the explicit product") {
    const auto coc = two_shears();
    auto sp = lyapunov_spectrum(coc, labels(10000, 3));
    Eigen::VectorXd oracle = Eigen::VectorXd::Zero(2);
    const int trials = 40;
    for (int t = 0; t < trials; ++t) oracle += product_exponents(coc, labels(1000, 100 + t));
    oracle /= trials;
    CHECK(sp.mu(0) > 0.0);
    CHECK(std::abs(sp.mu(0) + sp.mu(1)) < 1e-9);
    CHECK(std::abs(sp.mu(0) - oracle(0)) <= 0.02);
    CHECK(std::abs(sp.mu(1) - oracle(1)) <= 0.02);
  }

  TEST_CASE("commuting pair has zero exponents") {
    auto coc = table_cocycle({m2(2, 1, 1, 1), m2(1, -1, -1, 2)});
    auto sp = lyapunov_spectrum(coc, labels(10000, 5));
    CHECK(std::abs(sp.mu(0)) < 0.05);
  }

  TEST_CASE("verify_omet on a constant diagonal cocycle") {
    const auto coc = constant_cocycle(m2(2, 0, 0, 0.5));
    const auto path = labels(100, 1);
    auto sp = lyapunov_spectrum(coc, path);
    auto r = verify_omet(coc, sp, path, 0.01);
    CHECK(r.pass);
    CHECK(r.det_residual == 0.0);
    auto tight = verify_omet(coc, sp, path, 0.0);
    CHECK(tight.entries_pass);
    CHECK(tight.det_residual == 0.0);
  }

  TEST_CASE("verify_omet on a rotated diagonal cocycle") {
    const auto coc = rotated_diagonal_cocycle(Eigen::Vector2d(2.0, 0.5));
    const auto path = turns(10000, 7);
    auto sp = lyapunov_spectrum(coc, path);
    auto r = verify_omet(coc, sp, path, 0.1);
    CHECK(r.pass);
    REQUIRE(r.n0.has_value());
    CHECK(*r.n0 <= 5000);
    CHECK(r.det_residual < 0.01);
  }

  TEST_CASE("determinant identity") {
    const auto coc = rotated_diagonal_cocycle(Eigen::Vector2d(3.0, 0.5));
    auto sp = lyapunov_spectrum(coc, turns(10000, 9));
    CHECK(std::abs(sp.det_average - std::log(1.5)) < 1e-12);
    CHECK(std::abs(sp.mu.sum() - sp.det_average) < 0.01);
    CHECK(sp.history.back().det_residual < 0.01);
  }

  TEST_CASE("inversion symmetry") {
    const auto coc = two_shears();
    const auto path = labels(10000, 13);
    auto fwd = lyapunov_spectrum(coc, path);
    auto inv = lyapunov_spectrum(inverse_cocycle(coc), reversed(path));
    CHECK(std::abs(inv.mu(0) + fwd.mu(1)) <= 0.02);
    CHECK(std::abs(inv.mu(1) + fwd.mu(0)) <= 0.02);
  }

  TEST_CASE("moment guard warns") {
    auto sp = lyapunov_spectrum(constant_cocycle(m2(2, 0, 0, 0.5)), labels(100, 1), 1, 0.5);
    CHECK(sp.warnings.size() == 1);
  }

  TEST_CASE("ray matrix of constant steps") {
    auto tr = compose_trajectory(PosdefCone<double>(2), labels(50, 1), posdef_rule(constant_cocycle(m2(2, 0, 0, 1))));
    const Eigen::MatrixXd h = ray_matrix(tr);
    CHECK(std::abs(h(0, 0) - std::log(2.0)) < 1e-12);
    CHECK(std::abs(h(1, 1)) < 1e-12);
    CHECK(std::abs(h(0, 1)) < 1e-12);
    const double c = std::cos(0.3), s = std::sin(0.3);
    auto rot = compose_trajectory(PosdefCone<double>(2), labels(50, 1), posdef_rule(constant_cocycle(m2(c, -s, s, c))));
    CHECK_THROWS_AS(ray_matrix(rot), Error);
  }

  TEST_CASE("ray matrix and drift of a rotated diagonal cocycle") {
    const auto coc = rotated_diagonal_cocycle(Eigen::Vector2d(2.0, 0.5));
    const auto path = turns(10000, 17);
    auto sp = lyapunov_spectrum(coc, path);
    auto ff = compose_far_field(PosdefCone<BigReal>(2), path, posdef_rule<BigReal>(coc));
    PrecisionScope scope(ff.bits);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ray_matrix(ff.trajectory));
    CHECK(std::abs(eig.eigenvalues()(1) - sp.mu(0)) <= 0.05);
    CHECK(std::abs(eig.eigenvalues()(0) - sp.mu(1)) <= 0.05);
    CHECK(std::abs(ff.trajectory.distance(10000) / 10000.0 - 2.0 * sp.mu.norm()) <= 0.05);
  }
}
