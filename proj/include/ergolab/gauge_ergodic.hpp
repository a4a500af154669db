#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ergolab/driving.hpp"
#include "ergolab/gauge.hpp"

namespace ergolab {

struct GaugeCheckOptions {
  std::size_t n = 10000;
  std::size_t trials = 8;
  std::uint64_t seed = 1;
  std::size_t checkpoints = 40;
  double guard_threshold = 1.15;  // Hill tail index of the moment integrand must exceed this
  std::size_t jobs = 1;
};

// Ensemble series at geometric checkpoints.  The ensemble summary used for the
// verdict is the median across trials (heavy-tailed sums make the mean
// dominated by single trials); the mean is reported alongside.
struct GaugeCheckReport {
  std::string check;
  std::vector<std::size_t> depths;
  std::vector<double> median;
  std::vector<double> mean;
  double terminal = 0.0;  // median at the last depth
  double slope = 0.0;     // log-log slope of the median series
  double tail_index = 0.0;  // Hill estimate for the moment integrand
  bool guard_tripped = false;
  std::size_t skipped = 0;  // zero-sum checkpoints skipped (log check)
  bool degenerate = false;
  bool pass = false;
  std::string status;  // "pass", "fail" or "flagged"
  std::string note;
};

// D(|S_n|)/n -> 0 when the integral of D(|f|) is finite.
GaugeCheckReport aaronson_check(const ScalarDist& f, const GaugeFunction& D,
                                const GaugeCheckOptions& opt);
// |S_n| / n^{1/p} -> 0 for f in L^p, p in (0, 1).
GaugeCheckReport mz_check(double p, const ScalarDist& f, const GaugeCheckOptions& opt);
// |S_n|^{1/n} -> 1 for log-integrable f.
GaugeCheckReport log_check(const ScalarDist& f, const GaugeCheckOptions& opt);

struct TrivialBoundaryReport {
  std::vector<double> x;    // probe schedule x_n
  std::vector<double> sup;  // sup_z |D(|x_n - z|) - D(x_n)|
  double terminal = 0.0;
  bool pass = false;        // terminal < 1e-3
};

TrivialBoundaryReport trivial_boundary_check(const GaugeFunction& D, const std::vector<double>& x,
                                             double z_radius = 10.0, std::size_t z_points = 201);

}  // namespace ergolab
