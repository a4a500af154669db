#include <doctest.h>

#include <cmath>
#include <fstream>

#include "ergolab/boundary.hpp"
#include "ergolab/gauge_ergodic.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/step_rules.hpp"

using namespace ergolab;

TEST_SUITE("gauge") {
  TEST_CASE("gauge construction") {
    CHECK(GaugeFunction::power(0.5)(16.0) == 4.0);
    CHECK(GaugeFunction::log1p()(0.0) == 0.0);
    CHECK_THROWS_AS(GaugeFunction::custom("identity", [](double t) { return t; }), Error);
    CHECK_THROWS_AS(GaugeFunction::power(1.0), Error);
    CHECK_THROWS_AS(GaugeFunction::custom("offset", [](double t) { return std::sqrt(t) + 1; }), Error);
    auto tab = GaugeFunction::table({{0.0, 0.0}, {1.0, 1.0}, {4.0, 2.0}, {9.0, 3.0}});
    CHECK(tab(2.5) == doctest::Approx(1.5));
    CHECK(tab(36.0) == doctest::Approx(6.0));
  }

  TEST_CASE("gauge table from csv") {
    const std::string path = "gauge_table_test.csv";
    {
      std::ofstream f(path);
      f << "t,D\n0,0\n1,1\n4,2\n9,3\n";
    }
    auto g = GaugeFunction::table_from_csv(path);
    CHECK(g(4.0) == doctest::Approx(2.0));
    std::remove(path.c_str());
  }

  TEST_CASE("regularization of a power is the identity map") {
    RawGauge raw{"sqrt", [](double t) { return std::sqrt(t); }};
    auto D = regularize_gauge(raw);
    for (double t : {0.5, 3.0, 1e6}) CHECK(D(t) == doctest::Approx(std::sqrt(t)).epsilon(1e-6));
  }

  TEST_CASE("regularized log gauge is within the factor-two band") {
    RawGauge raw{"log1p", [](double t) { return std::log1p(t); }};
    auto D = regularize_gauge(raw);
    auto b = check_regularization(raw, D, gauge_probe_grid());
    CHECK(b.pass);
    // Dense-grid sup oracle at one point.
    double sup = 0.0;
    for (double lu = 0.0; lu < 12.0; lu += 1e-4) sup = std::max(sup, std::log1p(std::exp(lu) * 0.5) / std::exp(lu));
    CHECK(D(0.5) == doctest::Approx(sup).epsilon(1e-6));
  }

  TEST_CASE("bounded raw gauge is rejected") {
    RawGauge raw{"min5", [](double t) { return std::min(t, 5.0); }};
    CHECK_THROWS_AS(regularize_gauge(raw), Error);
  }

  TEST_CASE("aaronson on the zero function") {
    GaugeCheckOptions o;
    o.n = 1000;
    auto r = aaronson_check(ScalarDist::constant(0.0), GaugeFunction::power(0.5), o);
    CHECK(r.terminal == 0.0);
    CHECK(r.pass);
  }

  TEST_CASE("aaronson tail 0.4 trips the moment guard") {
    GaugeCheckOptions o;
    o.n = 100000;
    o.trials = 4;
    auto r = aaronson_check(ScalarDist::sym_pareto(0.4), GaugeFunction::power(0.5), o);
    CHECK(r.guard_tripped);
    CHECK(r.status == "flagged");
    CHECK_FALSE(r.pass);
  }

  TEST_CASE("aaronson tail 0.7 decays but is still above 0.02 at one million") {
    GaugeCheckOptions o;
    o.n = 1000000;
    o.trials = 8;
    auto r = aaronson_check(ScalarDist::sym_pareto(0.7), GaugeFunction::power(0.5), o);
    CHECK_FALSE(r.guard_tripped);
    CHECK(r.slope < 0.0);
    CHECK(r.terminal > 0.02);
    CHECK(r.terminal < 0.04);
  }

  TEST_CASE("mz examples") {
    GaugeCheckOptions o;
    o.n = 10000;
    auto b = mz_check(0.5, ScalarDist::uniform(-1.0, 3.0), o);
    CHECK(b.pass);
    CHECK(b.terminal < 1e-4);
    o.n = 100000;
    o.trials = 4;
    auto heavy = mz_check(0.5, ScalarDist::sym_pareto(0.4), o);
    CHECK(heavy.guard_tripped);
    CHECK_THROWS_AS(mz_check(1.5, ScalarDist::constant(1.0), o), Error);
  }

  TEST_CASE("log check examples") {
    GaugeCheckOptions o;
    o.n = 10000;
    o.trials = 1;
    auto one = log_check(ScalarDist::constant(1.0), o);
    CHECK(one.terminal == doctest::Approx(std::pow(10000.0, 1e-4)).epsilon(1e-12));
    CHECK(one.pass);
    auto zero = log_check(ScalarDist::constant(0.0), o);
    CHECK(zero.degenerate);
    CHECK(zero.skipped == zero.depths.size());
    o.trials = 4;
    auto cauchy = log_check(ScalarDist::exp_cauchy(), o);
    CHECK(cauchy.guard_tripped);
  }

  TEST_CASE("trivial boundary examples") {
    std::vector<double> x4, xe;
    for (int n = 2; n <= 24; ++n) x4.push_back(std::pow(4.0, n));
    for (int n = 1; n <= 30; ++n) xe.push_back(std::exp(static_cast<double>(n)));
    auto s = trivial_boundary_check(GaugeFunction::power(0.5), x4);
    CHECK(s.pass);
    for (std::size_t i = 0; i < x4.size(); ++i) CHECK(s.sup[i] <= 10.0 / (2.0 * std::sqrt(x4[i] - 10.0)) + 1e-12);
    CHECK(trivial_boundary_check(GaugeFunction::log1p(), xe).pass);
  }

  TEST_CASE("aaronson series equals the main-theorem series on the gauged line") {
    auto D = GaugeFunction::power(0.5);
    auto f = ScalarDist::sym_pareto(0.7);
    GaugeCheckOptions o;
    o.n = 5000;
    o.trials = 1;
    o.seed = 17;
    auto r = aaronson_check(f, D, o);
    const std::uint64_t trial_seed = rng::splitmix64(o.seed);
    std::vector<double> data(o.n);
    for (std::size_t k = 0; k < o.n; ++k) data[k] = f.sample(trial_seed, k, 0);
    TrajectoryOptions topt;
    topt.checkpoints = r.depths;
    auto tr = compose_trajectory(GaugedLine(D), SymbolPath(1, data), line_rule(), topt);
    auto m = verify_main_theorem(tr, GaugedLine::Boundary{});
    REQUIRE(m.b.size() == r.median.size());
    for (std::size_t i = 0; i < m.b.size(); ++i) {
      CHECK(m.a[i] == 0.0);
      CHECK(std::abs(m.b[i] - r.median[i]) <= 1e-12);
    }
  }
}
