#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/driving.hpp"
#include "ergolab/gauge.hpp"
#include "ergolab/runner.hpp"

namespace ergolab::runner {

// Read-only view of a config object that knows its own field path.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const Json& json() const { return *j_; }
  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  [[noreturn]] void fail(const std::string& msg) const { throw SchemaError(path_ + ": " + msg); }
  Node at(const std::string& key) const;
  std::optional<Node> find(const std::string& key) const;
  std::vector<Node> items(const std::string& key) const;
  // Rejects keys outside `known`.
  void allow(std::initializer_list<const char*> known) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;
  Eigen::MatrixXd matrix(const std::string& key) const;
  Eigen::MatrixXd as_matrix() const;

 private:
  const Json* j_;
  std::string path_;
};

struct GaugeSpec {
  std::string kind = "power";  // power | log1p | table
  double p = 0.5;
  std::vector<std::pair<double, double>> knots;
  std::string csv;
  GaugeFunction build() const;
};

struct RawGaugeSpec {
  std::string kind = "power";  // power | log1p | cap | table
  double p = 0.5;
  double cap = 5.0;
  std::vector<std::pair<double, double>> knots;
  RawGauge build() const;
};

struct MatrixSpec {
  std::string kind = "constant";  // constant | table | rotated_diagonal
  std::vector<Eigen::MatrixXd> matrices;
  Eigen::Vector2d values = Eigen::Vector2d::Ones();
};

struct SpaceSpec {
  std::string model;  // euclidean | gauged_line | poincare_disk | free_group_tree | posdef_cone
  int dim = 1;
  int rank = 2;
  GaugeSpec gauge;
  MatrixSpec cocycle;
};

struct GroupSpec {
  std::string kind;  // integer_lattice | free_group | heisenberg
  int dim = 1;
  int rank = 2;
  int radius = 14;
};

struct StepSpec {
  bool uniform = true;
  std::vector<std::string> support;
  std::vector<double> weights;
};

struct Expectation {
  double value = 0.0;
  double tolerance = 0.0;
};

struct CocycleParams {
  std::size_t depth = 1000;
  std::size_t trials = 1;
  std::string estimator = "terminal";  // terminal | infimum
  std::optional<Expectation> expect;
  std::size_t subadditivity_pairs = 0;
  std::optional<std::pair<double, std::size_t>> record_times;  // (epsilon, K)
  std::optional<Expectation> birkhoff;  // signed average, euclidean dim 1
};

struct BoundaryParams {
  std::size_t depth = 1000;
  std::size_t trials = 1;
  std::size_t stride = 0;  // 0: depth / 50
  double ray_tolerance = 0.0;  // 0: model default
  bool wrong_direction = true;
  bool stability = true;
  std::optional<Expectation> birkhoff;
};

struct OseledetsParams {
  std::size_t n = 10000;
  double eps = 0.1;
  std::size_t reorth_stride = 1;
  double moment_bound = 1e300;
  double det_tolerance = 0.01;
  double symmetry_tolerance = 0.02;
  std::optional<std::vector<double>> expect_mu;
  double expect_tolerance = 1e-9;
  std::optional<std::pair<std::size_t, std::size_t>> oracle;  // (trials, n)
  double oracle_tolerance = 0.02;
  bool ray_matrix = false;
  double ray_tolerance = 0.05;
};

struct WalkParams {
  StepSpec steps;
  std::size_t n = 10000;
  std::size_t trials = 4;
  std::uint64_t seed = 1;
  std::vector<std::string> checks;
  std::optional<Expectation> expect;
  std::size_t measure_n = 10000;
  std::size_t measure_trials = 20;
  std::size_t measure_depth = 4;
  std::size_t stationarity_n = 0;       // 0: measure_n
  std::size_t stationarity_trials = 0;  // 0: measure_trials
  std::size_t fk_samples = 10000;
  std::size_t growth_radius = 12;
  double centered_tolerance = 0.05;
  std::size_t harmonic_samples = 500;
};

struct GaugeParams {
  GaugeSpec D;
  std::optional<RawGaugeSpec> raw;
  ScalarDist f;
  double p = 0.5;
  std::size_t n = 10000;
  std::size_t trials = 8;
  std::uint64_t seed = 1;
  std::vector<std::string> checks;
  double probe_base = 4.0;
  std::size_t probe_count = 20;
  double guard_threshold = 1.15;
};

struct Experiment {
  std::string name;
  std::string tag;
  std::string lab;
  std::optional<DrivingSystem> driving;
  std::optional<SpaceSpec> space;
  std::optional<GroupSpec> group;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::map<std::string, std::string> tags;  // per-check tag overrides
  CocycleParams cocycle;
  BoundaryParams boundary;
  OseledetsParams oseledets;
  WalkParams walk;
  GaugeParams gauge;
};

Experiment parse_experiment(const Json& config);
// Checks that need the model objects (step supports, symbol widths).
void validate_experiment(const Experiment& x);
void run_lab(const Experiment& x, const RunOptions& options, RunReport& report);

}  // namespace ergolab::runner
