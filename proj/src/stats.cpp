#include "ergolab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergolab/error.hpp"

namespace ergolab::stats {

MeanSe mean_se(std::span<const double> xs) {
  require(!xs.empty(), "mean_se: empty sample");
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  if (xs.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double median(std::vector<double> xs) {
  require(!xs.empty(), "median: empty sample");
  const auto mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
  if (xs.size() % 2 == 1) return xs[mid];
  const double hi = xs[mid];
  const double lo = *std::max_element(xs.begin(), xs.begin() + mid);
  return 0.5 * (lo + hi);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "loglog_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mm = static_cast<double>(m);
  const double den = mm * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (mm * sxy - sx * sy) / den;
}

double hill_tail_index(std::vector<double> xs, std::size_t k) {
  for (double& v : xs) v = std::abs(v);
  require(k >= 2 && k < xs.size(), "hill_tail_index: need 2 <= k < sample size");
  std::partial_sort(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k + 1), xs.end(),
                    std::greater<>());
  const double threshold = xs[k];
  if (!(threshold > 0.0)) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) acc += std::log(xs[i] / threshold);
  if (acc == 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(k) / acc;
}

std::vector<std::size_t> geometric_checkpoints(std::size_t n, std::size_t count,
                                               std::size_t first) {
  require(n >= 1 && first >= 1, "geometric_checkpoints: n and first must be positive");
  std::vector<std::size_t> out;
  first = std::min(first, n);
  if (count < 2 || first == n) return {n};
  const double ratio = std::pow(static_cast<double>(n) / static_cast<double>(first),
                                1.0 / static_cast<double>(count - 1));
  double v = static_cast<double>(first);
  for (std::size_t i = 0; i < count; ++i, v *= ratio) {
    auto k = std::min(n, static_cast<std::size_t>(std::llround(v)));
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  if (out.back() != n) out.push_back(n);
  return out;
}

}  // namespace ergolab::stats
