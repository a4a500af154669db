#include "ergolab/gauge_ergodic.hpp"

#include <algorithm>
#include <cmath>

#include "ergolab/error.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/stats.hpp"

namespace ergolab {

namespace {

// Runs the trials: for each, sums n iid draws of f and evaluates
// stat(S_k, k) at the checkpoints.  The moment integrand is sampled from the
// first trial's increments (up to 10^6 of them).
GaugeCheckReport run_series(const std::string& name, const ScalarDist& f,
                            const GaugeCheckOptions& opt,
                            const std::function<double(double)>& integrand,
                            const std::function<double(double, std::size_t)>& stat) {
  f.validate();
  require(opt.n >= 2 && opt.trials >= 1, "gauge check: need n >= 2 and at least one trial");
  GaugeCheckReport r;
  r.check = name;
  r.depths = stats::geometric_checkpoints(opt.n, opt.checkpoints, 10);
  const std::size_t guard_samples = std::min<std::size_t>(opt.n, 1000000);
  std::vector<double> moment(guard_samples);

  auto rows = parallel_map(opt.trials, opt.jobs, [&](std::size_t t) {
    const std::uint64_t seed = rng::splitmix64(opt.seed + t);
    std::vector<double> row;
    row.reserve(r.depths.size());
    double s = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 1; k <= opt.n; ++k) {
      const double x = f.sample(seed, k - 1, 0);
      if (t == 0 && k <= guard_samples) moment[k - 1] = integrand(x);
      s += x;
      if (k == r.depths[next]) {
        row.push_back(stat(s, k));
        ++next;
      }
    }
    return row;
  });

  bool finite = true;
  for (double v : moment) finite = finite && std::isfinite(v);
  const std::size_t k = std::max<std::size_t>(100, guard_samples / 1000);
  if (!finite) {
    r.tail_index = 0.0;
  } else if (guard_samples > k + 1) {
    r.tail_index = stats::hill_tail_index(moment, k);
  } else {
    r.tail_index = INFINITY;
  }
  r.guard_tripped = !finite || r.tail_index <= opt.guard_threshold;

  std::vector<double> col(opt.trials);
  std::vector<double> x;
  for (std::size_t c = 0; c < r.depths.size(); ++c) {
    std::size_t used = 0;
    for (std::size_t t = 0; t < opt.trials; ++t)
      if (std::isfinite(rows[t][c])) col[used++] = rows[t][c];
    if (used == 0) {
      r.median.push_back(NAN);
      r.mean.push_back(NAN);
    } else {
      std::vector<double> v(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(used));
      r.median.push_back(stats::median(v));
      r.mean.push_back(stats::mean_se(v).mean);
    }
    x.push_back(static_cast<double>(r.depths[c]));
  }
  r.terminal = r.median.back();
  r.slope = stats::loglog_slope(x, r.median);
  return r;
}

void finalize(GaugeCheckReport& r, bool pass) {
  r.pass = pass && !r.guard_tripped;
  if (r.guard_tripped) {
    r.status = "flagged";
    r.note = "moment guard tripped (tail index " + std::to_string(r.tail_index) +
             "): hypothesis violated, series reported without a verdict";
  } else {
    r.status = r.pass ? "pass" : "fail";
  }
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

GaugeCheckReport aaronson_check(const ScalarDist& f, const GaugeFunction& D,
                                const GaugeCheckOptions& opt) {
  auto r = run_series(
      "aaronson", f, opt, [&D](double x) { return D(std::abs(x)); },
      [&D](double s, std::size_t k) { return D(std::abs(s)) / static_cast<double>(k); });
  finalize(r, r.terminal < 0.02 && (r.slope < 0.0 || all_zero(r.median)));
  return r;
}

GaugeCheckReport mz_check(double p, const ScalarDist& f, const GaugeCheckOptions& opt) {
  require(p > 0.0 && p < 1.0, "mz_check: p must lie in (0, 1)");
  auto r = run_series(
      "marcinkiewicz_zygmund", f, opt, [p](double x) { return std::pow(std::abs(x), p); },
      [p](double s, std::size_t k) { return std::abs(s) / std::pow(static_cast<double>(k), 1.0 / p); });
  finalize(r, r.terminal < 0.02);
  return r;
}

GaugeCheckReport log_check(const ScalarDist& f, const GaugeCheckOptions& opt) {
  auto r = run_series(
      "log_integrable", f, opt,
      [](double x) { return std::max(0.0, std::log(std::abs(x))); },
      [](double s, std::size_t k) {
        if (s == 0.0) return std::nan("");  // skipped
        return std::exp(std::log(std::abs(s)) / static_cast<double>(k));
      });
  for (double v : r.median) r.skipped += std::isnan(v) ? 1 : 0;
  r.degenerate = r.skipped == r.median.size();
  if (r.degenerate) {
    r.pass = false;
    r.status = "flagged";
    r.note = "degenerate: every checkpoint sum is zero";
    return r;
  }
  // Terminal: last checkpoint with a nonzero sum.
  for (std::size_t c = r.median.size(); c-- > 0;)
    if (!std::isnan(r.median[c])) {
      r.terminal = r.median[c];
      break;
    }
  finalize(r, std::abs(r.terminal - 1.0) < 0.01);
  return r;
}

TrivialBoundaryReport trivial_boundary_check(const GaugeFunction& D, const std::vector<double>& x,
                                             double z_radius, std::size_t z_points) {
  require(!x.empty() && z_points >= 2, "trivial_boundary_check: empty probe schedule");
  TrivialBoundaryReport r;
  r.x = x;
  for (double xn : x) {
    const double base = D(std::abs(xn));
    double sup = 0.0;
    for (std::size_t i = 0; i < z_points; ++i) {
      const double z = -z_radius + 2.0 * z_radius * static_cast<double>(i) / static_cast<double>(z_points - 1);
      sup = std::max(sup, std::abs(D(std::abs(xn - z)) - base));
    }
    r.sup.push_back(sup);
  }
  r.terminal = r.sup.back();
  r.pass = r.terminal < 1e-3;
  return r;
}

}  // namespace ergolab
