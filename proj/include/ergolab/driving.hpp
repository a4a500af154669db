#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace ergolab {

// One real-valued marginal of an iid symbol stream.
struct ScalarDist {
  enum class Kind { constant, uniform, normal, choice, sym_pareto, exp_cauchy };

  Kind kind = Kind::constant;
  double a = 0.0;  // constant value | lower bound | mean | tail index | location
  double b = 0.0;  // upper bound | sd | scale
  std::vector<double> values;   // choice
  std::vector<double> weights;  // choice

  static ScalarDist constant(double c);
  static ScalarDist uniform(double lo, double hi);
  static ScalarDist normal(double mean, double sd);
  static ScalarDist choice(std::vector<double> values, std::vector<double> weights);
  // Symmetric Pareto: |X| = scale * U^{-1/tail}, so P(|X| > x) = (x/scale)^{-tail}
  // for x >= scale; the sign is an independent fair coin.
  static ScalarDist sym_pareto(double tail, double scale = 1.0);
  // exp of a Cauchy(location, scale) variable.
  static ScalarDist exp_cauchy(double location = 0.0, double scale = 1.0);

  void validate() const;
  // Uses lanes `lane` and `lane + 1`.
  double sample(std::uint64_t seed, std::uint64_t index, std::uint32_t lane) const;
};

struct DrivingSystem {
  enum class Kind { iid, irrational_rotation, finite_markov };

  Kind kind = Kind::iid;
  std::uint64_t seed = 0;
  std::vector<ScalarDist> components;  // iid: one marginal per symbol coordinate
  double theta = 0.0;                  // rotation angle, stored as given
  double x0 = 0.0;                     // rotation start
  Eigen::MatrixXd transition;          // markov
  Eigen::VectorXd initial;             // markov initial distribution

  static DrivingSystem iid(std::vector<ScalarDist> components, std::uint64_t seed);
  static DrivingSystem rotation(double theta, double x0);
  static DrivingSystem markov(Eigen::MatrixXd transition, Eigen::VectorXd initial,
                              std::uint64_t seed);

  std::size_t width() const;  // symbol width
  void validate() const;      // throws Error on invalid params
};

// Finite sequence of fixed-width real symbols (labels are stored as reals).
class SymbolPath {
 public:
  SymbolPath() = default;
  SymbolPath(std::size_t width, std::vector<double> data);

  std::size_t size() const { return width_ == 0 ? 0 : data_.size() / width_; }
  std::size_t width() const { return width_; }
  bool empty() const { return data_.empty(); }

  Eigen::Map<const Eigen::VectorXd> operator[](std::size_t k) const {
    return Eigen::Map<const Eigen::VectorXd>(data_.data() + k * width_,
                                             static_cast<Eigen::Index>(width_));
  }
  double value(std::size_t k, std::size_t c = 0) const { return data_[k * width_ + c]; }
  int label(std::size_t k) const { return static_cast<int>(data_[k * width_]); }

  const std::vector<double>& data() const { return data_; }
  bool operator==(const SymbolPath&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<double> data_;
};

// Symbols with indices offset, ..., offset + n - 1 of the stream.
SymbolPath sample_path(const DrivingSystem& system, std::size_t n, std::size_t offset = 0);

// Suffix after dropping the first k symbols: the path of T^k(omega).
SymbolPath shift(const SymbolPath& path, std::size_t k);

// Symbols in reverse order.
SymbolPath reversed(const SymbolPath& path);

std::string to_string(DrivingSystem::Kind kind);

}  // namespace ergolab
