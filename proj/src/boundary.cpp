#include "ergolab/boundary.hpp"

namespace ergolab {

BirkhoffResult birkhoff_from_boundary(const Trajectory<Euclidean<double>>& tr,
                                      double drift_threshold) {
  require(tr.model.dim() == 1, "birkhoff_from_boundary: needs the one-dimensional model");
  require(tr.size() >= 1, "birkhoff_from_boundary: empty trajectory");
  BirkhoffResult r;
  const double n = static_cast<double>(tr.size());
  r.alpha_hat = tr.distance(tr.size()) / n;
  if (!(r.alpha_hat > drift_threshold)) {
    r.sublinear = true;
    r.value = r.alpha_hat;
    return r;
  }
  const auto z = tr.model.orbit_point(tr.terminal);
  double best = INFINITY;
  for (int sign : {1, -1}) {
    const auto xi = tr.model.boundary(Eigen::VectorXd::Constant(1, sign));
    const double resid = std::abs(-tr.model.horofunction(xi, z) / n - r.alpha_hat);
    if (resid < best) {
      best = resid;
      r.sign = sign;
    }
  }
  r.value = r.sign * r.alpha_hat;
  return r;
}

}  // namespace ergolab
