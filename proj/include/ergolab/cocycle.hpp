#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergolab/driving.hpp"
#include "ergolab/error.hpp"
#include "ergolab/space_model.hpp"

namespace ergolab {

struct TrajectoryOptions {
  std::vector<std::size_t> checkpoints;  // depths whose orbit points are kept
  bool dense = false;                    // keep every orbit point up to dense_limit, then every dense_stride
  std::size_t dense_limit = 100000;
  std::size_t dense_stride = 10;
};

// Z_k = g_1 g_2 ... g_k composed on the right, with |Z_k| = d(x0, Z_k x0).
template <MetricModel M>
struct Trajectory {
  M model;
  std::vector<double> distances;         // distances[k - 1] = |Z_k|
  std::vector<std::size_t> depths;       // increasing depths with stored orbit points
  std::vector<typename M::Point> points;  // points[i] = Z_{depths[i]} x0
  typename M::Isometry terminal;
  typename M::Point origin;  // x0

  std::size_t size() const { return distances.size(); }
  double distance(std::size_t k) const { return k == 0 ? 0.0 : distances.at(k - 1); }
  bool has_point(std::size_t k) const {
    return k == 0 || std::binary_search(depths.begin(), depths.end(), k);
  }
  const typename M::Point& point(std::size_t k) const {
    if (k == 0) return origin;
    auto it = std::lower_bound(depths.begin(), depths.end(), k);
    if (it == depths.end() || *it != k)
      throw Error("trajectory: orbit point at depth " + std::to_string(k) + " was not retained");
    return points[static_cast<std::size_t>(it - depths.begin())];
  }
};

namespace detail {

// before_step(k, trajectory) runs ahead of step k.
template <MetricModel M, class Rule, class Hook>
Trajectory<M> compose(const M& model, const SymbolPath& path, Rule&& rule,
                      const TrajectoryOptions& opt, Hook&& before_step) {
  const std::size_t n = path.size();
  Trajectory<M> tr{model, {}, {}, {}, model.identity(), model.basepoint()};
  tr.distances.reserve(n);
  std::vector<std::size_t> keep = opt.checkpoints;
  std::sort(keep.begin(), keep.end());
  std::size_t next_keep = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    before_step(k, tr);
    typename M::Isometry g;
    try {
      g = rule(path[k - 1]);
    } catch (const std::exception& e) {
      throw Error("step rule failed at index " + std::to_string(k - 1) + ": " + e.what());
    }
    model.right_multiply(tr.terminal, g);
    tr.distances.push_back(to_double(typename M::Real(model.displacement(tr.terminal))));
    while (next_keep < keep.size() && keep[next_keep] < k) ++next_keep;
    bool store = next_keep < keep.size() && keep[next_keep] == k;
    if (opt.dense) store = store || k <= opt.dense_limit || (k - opt.dense_limit) % opt.dense_stride == 0;
    if (store) {
      tr.depths.push_back(k);
      tr.points.push_back(model.orbit_point(tr.terminal));
    }
  }
  return tr;
}

}  // namespace detail

// rule(symbol) returns the isometry g(T^k omega) for the k-th symbol.
template <MetricModel M, class Rule>
Trajectory<M> compose_trajectory(const M& model, const SymbolPath& path, Rule&& rule,
                                 const TrajectoryOptions& opt = {}) {
  return detail::compose(model, path, rule, opt, [](std::size_t, Trajectory<M>&) {});
}

// Trajectory in a BigReal model.  The charts at Z_k need about
// factor * |Z_k| nats of relative precision, so the working precision is
// raised block by block ahead of the largest step seen so far, and Z_k is
// promoted each time.  A pass that ends with some |Z_k| beyond the precision
// it was computed at is redone with a wider margin.  Callers keep a
// PrecisionScope(bits) open while they evaluate charts.
template <MetricModel M>
struct FarFieldTrajectory {
  Trajectory<M> trajectory;
  unsigned bits = 0;
};

template <MetricModel M, class Rule>
FarFieldTrajectory<M> compose_far_field(const M& model, const SymbolPath& path, Rule&& rule,
                                        const TrajectoryOptions& opt = {}, double factor = 1.5) {
  constexpr std::size_t block = 64;
  auto need = [factor](double reach) { return bits_for_log_range(factor * reach); };
  for (double margin = 2.0;; margin *= 4.0) {
    require(margin < 1e6, "compose_far_field: precision requirement out of range");
    std::optional<PrecisionScope> scope;
    unsigned bits = 0;
    std::vector<unsigned> used;
    used.reserve(path.size());
    double rate = 1.0;
    auto raise = [&](std::size_t k, Trajectory<M>& tr) {
      if (k >= 2) {
        const double step = tr.distances[k - 2] - (k >= 3 ? tr.distances[k - 3] : 0.0);
        if (std::isfinite(step)) rate = std::max(rate, std::abs(step));
      }
      if (k % block == 1 || k == 1) {
        const double ahead = tr.distance(k - 1) + margin * rate * static_cast<double>(block);
        const unsigned target = need(ahead);
        if (target > bits) {
          bits = target;
          scope.reset();
          scope.emplace(bits);
          model.right_multiply(tr.terminal, model.identity());
        }
      }
      used.push_back(bits);
    };
    try {
      auto tr = detail::compose(model, path, rule, opt, raise);
      bool fits = true;
      for (std::size_t k = 0; k < tr.distances.size() && fits; ++k)
        fits = std::isfinite(tr.distances[k]) && need(tr.distances[k]) <= used[k];
      if (fits) return {std::move(tr), std::max(bits, 256u)};
    } catch (const Error&) {
    }
  }
}

// A real cocycle S_1..S_n that can optionally be re-evaluated along shifted
// paths: shifted(m, n) = S_n(T^m omega).
struct ScalarCocycle {
  std::vector<double> values;
  std::function<double(std::size_t, std::size_t)> shifted;

  std::size_t size() const { return values.size(); }
  double at(std::size_t n) const { return n == 0 ? 0.0 : values.at(n - 1); }
  double at_shift(std::size_t m, std::size_t n) const {
    if (n == 0) return 0.0;
    if (m == 0) return at(n);
    require(static_cast<bool>(shifted), "cocycle: shifted values are not available");
    return shifted(m, n);
  }
};

// Birkhoff sums of the increments f(T^k omega).
ScalarCocycle additive_cocycle(std::vector<double> increments);
// S_n = f(n), the same on every shifted path.
ScalarCocycle deterministic_cocycle(std::function<double(std::size_t)> f, std::size_t n);

// S_n = |Z_n|, re-evaluated on T^m omega as d(Z_m x0, Z_{m+n} x0); needs the
// orbit points at the depths it is queried on.
template <MetricModel M>
ScalarCocycle trajectory_cocycle(const Trajectory<M>& tr) {
  auto shared = std::make_shared<const Trajectory<M>>(tr);
  ScalarCocycle s{tr.distances, {}};
  s.shifted = [shared](std::size_t m, std::size_t n) {
    return to_double(typename M::Real(shared->model.distance(shared->point(m), shared->point(m + n))));
  };
  return s;
}

struct DriftEstimate {
  double alpha = 0.0;            // min over n <= N of mean_n / n
  std::size_t argmin = 0;        // smallest n attaining the minimum
  double alpha_se = 0.0;         // se_n / n at the argmin
  std::size_t depth = 0;         // N
  std::size_t trials = 0;
  std::vector<double> mean;      // mean[n - 1]: ensemble average of S_n
  std::vector<double> se;        // standard error of mean[n - 1]
  double terminal = 0.0;         // ensemble mean of S_N / N
  double terminal_se = 0.0;
};

DriftEstimate estimate_drift(std::span<const std::vector<double>> series, std::size_t N);
DriftEstimate estimate_drift(std::span<const ScalarCocycle> ensemble, std::size_t N);

template <MetricModel M>
DriftEstimate estimate_drift(std::span<const Trajectory<M>> ensemble, std::size_t N) {
  std::vector<std::vector<double>> series;
  series.reserve(ensemble.size());
  for (const auto& t : ensemble) series.push_back(t.distances);
  return estimate_drift(std::span<const std::vector<double>>(series), N);
}

struct RecordTimeParams {
  double epsilon = 0.1;
  std::size_t K = 1;
  std::size_t horizon = 0;  // 0: the cocycle length
};

// All n in [K, horizon] with S_n - S_{n-k}(T^k omega) >= (alpha - eps) k for
// every k in [K, n].
std::vector<std::size_t> record_times(const ScalarCocycle& S, double alpha,
                                      const RecordTimeParams& params);

struct SubadditivityReport {
  double max_violation = 0.0;  // max of S_{n+m} - S_m - S_n(T^m omega)
  std::size_t worst_n = 0, worst_m = 0;
  std::size_t pairs = 0;
  bool pass = false;           // max_violation <= 1e-9
};

SubadditivityReport check_subadditivity(const ScalarCocycle& S, std::size_t pairs,
                                        std::uint64_t seed = 1);

}  // namespace ergolab
