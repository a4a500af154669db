#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ergolab::stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean; 0 for a single sample
};

MeanSe mean_se(std::span<const double> xs);
double median(std::vector<double> xs);

// Least-squares slope of ln y against ln x over entries with x, y > 0.
// Returns NaN when fewer than two usable points remain.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Hill estimator of the tail index from the k largest |x|.
double hill_tail_index(std::vector<double> xs, std::size_t k);

// Geometric checkpoint schedule on [first, n], always containing n.
std::vector<std::size_t> geometric_checkpoints(std::size_t n, std::size_t count,
                                               std::size_t first = 1);

}  // namespace ergolab::stats
