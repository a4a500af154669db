#include "ergolab/driving.hpp"

#include <cmath>
#include <numbers>

#include "ergolab/error.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

ScalarDist ScalarDist::constant(double c) { return {Kind::constant, c, 0.0, {}, {}}; }
ScalarDist ScalarDist::uniform(double lo, double hi) { return {Kind::uniform, lo, hi, {}, {}}; }
ScalarDist ScalarDist::normal(double mean, double sd) { return {Kind::normal, mean, sd, {}, {}}; }
ScalarDist ScalarDist::choice(std::vector<double> values, std::vector<double> weights) {
  return {Kind::choice, 0.0, 0.0, std::move(values), std::move(weights)};
}
ScalarDist ScalarDist::sym_pareto(double tail, double scale) {
  return {Kind::sym_pareto, tail, scale, {}, {}};
}
ScalarDist ScalarDist::exp_cauchy(double location, double scale) {
  return {Kind::exp_cauchy, location, scale, {}, {}};
}

void ScalarDist::validate() const {
  switch (kind) {
    case Kind::constant:
      require(std::isfinite(a), "constant distribution: value must be finite");
      break;
    case Kind::uniform:
      require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform distribution: need lo < hi");
      break;
    case Kind::normal:
      require(std::isfinite(a) && b >= 0.0, "normal distribution: need sd >= 0");
      break;
    case Kind::choice: {
      require(!values.empty() && values.size() == weights.size(),
              "choice distribution: values and weights must be nonempty and equally long");
      double sum = 0.0;
      for (double w : weights) {
        require(w >= 0.0, "choice distribution: negative weight");
        sum += w;
      }
      require(std::abs(sum - 1.0) <= 1e-12, "choice distribution: weights must sum to 1");
      break;
    }
    case Kind::sym_pareto:
      require(a > 0.0 && b > 0.0, "symmetric Pareto: tail index and scale must be positive");
      break;
    case Kind::exp_cauchy:
      require(b > 0.0, "exp-Cauchy: scale must be positive");
      break;
  }
}

double ScalarDist::sample(std::uint64_t seed, std::uint64_t index, std::uint32_t lane) const {
  switch (kind) {
    case Kind::constant:
      return a;
    case Kind::uniform:
      return a + (b - a) * rng::uniform(seed, index, lane);
    case Kind::normal:
      return a + b * rng::normal(seed, index, lane);
    case Kind::choice: {
      const double u = rng::uniform(seed, index, lane);
      double acc = 0.0;
      for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return values[i];
      }
      // rounding in the cumulative sum: last positive-weight value
      for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) return values[i];
      return values.back();
    }
    case Kind::sym_pareto: {
      const double u = rng::uniform(seed, index, lane);
      const double sign = rng::uniform(seed, index, lane + 1) < 0.5 ? -1.0 : 1.0;
      return sign * b * std::pow(u, -1.0 / a);
    }
    case Kind::exp_cauchy: {
      const double u = rng::uniform(seed, index, lane);
      return std::exp(a + b * std::tan(std::numbers::pi * (u - 0.5)));
    }
  }
  return 0.0;
}

DrivingSystem DrivingSystem::iid(std::vector<ScalarDist> components, std::uint64_t seed) {
  DrivingSystem s;
  s.kind = Kind::iid;
  s.components = std::move(components);
  s.seed = seed;
  return s;
}

DrivingSystem DrivingSystem::rotation(double theta, double x0) {
  DrivingSystem s;
  s.kind = Kind::irrational_rotation;
  s.theta = theta;
  s.x0 = x0;
  return s;
}

DrivingSystem DrivingSystem::markov(Eigen::MatrixXd transition, Eigen::VectorXd initial,
                                    std::uint64_t seed) {
  DrivingSystem s;
  s.kind = Kind::finite_markov;
  s.transition = std::move(transition);
  s.initial = std::move(initial);
  s.seed = seed;
  return s;
}

std::size_t DrivingSystem::width() const {
  return kind == Kind::iid ? components.size() : 1;
}

void DrivingSystem::validate() const {
  switch (kind) {
    case Kind::iid:
      require(!components.empty(), "iid driving system: no components");
      require(components.size() <= 64, "iid driving system: at most 64 components");
      for (const auto& c : components) c.validate();
      break;
    case Kind::irrational_rotation:
      require(theta > 0.0 && theta < 1.0, "rotation: angle must lie in (0, 1)");
      require(x0 >= 0.0 && x0 < 1.0, "rotation: start must lie in [0, 1)");
      break;
    case Kind::finite_markov: {
      const auto k = transition.rows();
      require(k >= 1 && transition.cols() == k, "markov: transition matrix must be square");
      require(initial.size() == k, "markov: initial distribution has wrong length");
      for (Eigen::Index i = 0; i < k; ++i) {
        require((transition.row(i).array() >= 0.0).all(), "markov: negative transition entry");
        require(std::abs(transition.row(i).sum() - 1.0) <= 1e-12,
                "markov: transition row " + std::to_string(i) + " does not sum to 1");
      }
      require((initial.array() >= 0.0).all() && std::abs(initial.sum() - 1.0) <= 1e-12,
              "markov: initial distribution is not a probability vector");
      break;
    }
  }
}

SymbolPath::SymbolPath(std::size_t width, std::vector<double> data)
    : width_(width), data_(std::move(data)) {
  require(width_ > 0 || data_.empty(), "SymbolPath: zero width");
  require(width_ == 0 || data_.size() % width_ == 0, "SymbolPath: ragged data");
}

namespace {

int categorical(const Eigen::VectorXd& p, double u) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    if (u < acc) return static_cast<int>(i);
  }
  for (Eigen::Index i = p.size(); i-- > 0;)
    if (p(i) > 0.0) return static_cast<int>(i);
  return 0;
}

}  // namespace

SymbolPath sample_path(const DrivingSystem& system, std::size_t n, std::size_t offset) {
  require(n >= 1, "sample_path: n must be at least 1");
  system.validate();
  const std::size_t w = system.width();
  std::vector<double> data(n * w);
  switch (system.kind) {
    case DrivingSystem::Kind::iid:
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < w; ++c)
          data[k * w + c] = system.components[c].sample(system.seed, offset + k,
                                                        static_cast<std::uint32_t>(2 * c));
      break;
    case DrivingSystem::Kind::irrational_rotation:
      for (std::size_t k = 0; k < n; ++k) {
        const double v = std::fmod(system.x0 + static_cast<double>(offset + k) * system.theta, 1.0);
        data[k] = v;
      }
      break;
    case DrivingSystem::Kind::finite_markov: {
      // Sequential chain; step i draws from lane 0 at counter i.
      int state = categorical(system.initial, rng::uniform(system.seed, 0, 0));
      for (std::size_t i = 0; i < offset + n; ++i) {
        if (i >= offset) data[i - offset] = state;
        state = categorical(system.transition.row(state).transpose(),
                            rng::uniform(system.seed, i + 1, 0));
      }
      break;
    }
  }
  return SymbolPath(w, std::move(data));
}

SymbolPath shift(const SymbolPath& path, std::size_t k) {
  require(k <= path.size(), "shift: k exceeds path length");
  const std::size_t w = path.width();
  std::vector<double> data(path.data().begin() + static_cast<std::ptrdiff_t>(k * w),
                           path.data().end());
  return SymbolPath(w, std::move(data));
}

SymbolPath reversed(const SymbolPath& path) {
  const std::size_t w = path.width(), n = path.size();
  std::vector<double> data(path.data().size());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < w; ++c) data[k * w + c] = path.value(n - 1 - k, c);
  return SymbolPath(w, std::move(data));
}

std::string to_string(DrivingSystem::Kind kind) {
  switch (kind) {
    case DrivingSystem::Kind::iid: return "iid";
    case DrivingSystem::Kind::irrational_rotation: return "irrational_rotation";
    case DrivingSystem::Kind::finite_markov: return "finite_markov";
  }
  return "unknown";
}

}  // namespace ergolab
