#include "ergolab/cocycle.hpp"

#include <cmath>
#include <limits>

#include "ergolab/rng.hpp"
#include "ergolab/stats.hpp"

namespace ergolab {

ScalarCocycle additive_cocycle(std::vector<double> increments) {
  auto prefix = std::make_shared<std::vector<double>>(increments.size() + 1, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) (*prefix)[i + 1] = (*prefix)[i] + increments[i];
  ScalarCocycle s{std::vector<double>(prefix->begin() + 1, prefix->end()), {}};
  s.shifted = [prefix](std::size_t m, std::size_t n) {
    require(m + n < prefix->size(), "additive cocycle: shifted window exceeds the path");
    return (*prefix)[m + n] - (*prefix)[m];
  };
  return s;
}

ScalarCocycle deterministic_cocycle(std::function<double(std::size_t)> f, std::size_t n) {
  ScalarCocycle s;
  s.values.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) s.values.push_back(f(k));
  s.shifted = [f](std::size_t, std::size_t k) { return f(k); };
  return s;
}

DriftEstimate estimate_drift(std::span<const std::vector<double>> series, std::size_t N) {
  require(!series.empty(), "estimate_drift: empty ensemble");
  require(N >= 1, "estimate_drift: depth must be positive");
  for (const auto& s : series)
    require(s.size() >= N, "estimate_drift: depth exceeds a member's length");
  DriftEstimate d;
  d.depth = N;
  d.trials = series.size();
  d.mean.resize(N);
  d.se.resize(N);
  std::vector<double> column(series.size());
  d.alpha = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= N; ++n) {
    for (std::size_t t = 0; t < series.size(); ++t) column[t] = series[t][n - 1];
    const auto ms = stats::mean_se(column);
    d.mean[n - 1] = ms.mean;
    d.se[n - 1] = ms.se;
    const double ratio = ms.mean / static_cast<double>(n);
    if (ratio < d.alpha) {
      d.alpha = ratio;
      d.argmin = n;
      d.alpha_se = ms.se / static_cast<double>(n);
    }
  }
  d.terminal = d.mean[N - 1] / static_cast<double>(N);
  d.terminal_se = d.se[N - 1] / static_cast<double>(N);
  return d;
}

DriftEstimate estimate_drift(std::span<const ScalarCocycle> ensemble, std::size_t N) {
  std::vector<std::vector<double>> series;
  series.reserve(ensemble.size());
  for (const auto& s : ensemble) series.push_back(s.values);
  return estimate_drift(std::span<const std::vector<double>>(series), N);
}

std::vector<std::size_t> record_times(const ScalarCocycle& S, double alpha,
                                      const RecordTimeParams& params) {
  require(params.epsilon > 0.0, "record_times: epsilon must be positive");
  require(params.K >= 1, "record_times: K must be at least 1");
  const std::size_t horizon = params.horizon == 0 ? S.size() : params.horizon;
  require(horizon <= S.size(), "record_times: horizon exceeds the cocycle length");
  const double rate = alpha - params.epsilon;
  std::vector<std::size_t> out;
  for (std::size_t n = params.K; n <= horizon; ++n) {
    const double sn = S.at(n);
    bool ok = true;
    for (std::size_t k = params.K; k <= n && ok; ++k)
      ok = sn - S.at_shift(k, n - k) >= rate * static_cast<double>(k);
    if (ok) out.push_back(n);
  }
  return out;
}

SubadditivityReport check_subadditivity(const ScalarCocycle& S, std::size_t pairs,
                                        std::uint64_t seed) {
  const std::size_t len = S.size();
  require(len >= 2, "check_subadditivity: cocycle too short");
  SubadditivityReport r;
  r.max_violation = -std::numeric_limits<double>::infinity();
  rng::Stream s(seed);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t total = 2 + s.below(len - 1);  // n + m in [2, len]
    const std::size_t m = 1 + s.below(total - 1);
    const std::size_t n = total - m;
    const double v = S.at(n + m) - S.at(m) - S.at_shift(m, n);
    if (v > r.max_violation) {
      r.max_violation = v;
      r.worst_n = n;
      r.worst_m = m;
    }
  }
  r.pairs = pairs;
  r.pass = r.max_violation <= 1e-9;
  return r;
}

}  // namespace ergolab
