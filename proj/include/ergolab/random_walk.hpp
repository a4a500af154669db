#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ergolab/cocycle.hpp"
#include "ergolab/groups.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/stats.hpp"

namespace ergolab {

template <class G>
concept WordGroup = requires(const G g, typename G::Element x, typename G::Element& xr) {
  { g.identity() } -> std::convertible_to<typename G::Element>;
  { g.multiply(x, x) } -> std::convertible_to<typename G::Element>;
  { g.inverse(x) } -> std::convertible_to<typename G::Element>;
  g.right_multiply(xr, x);
  { g.length(x) } -> std::convertible_to<LengthBounds>;
  { g.generators() } -> std::convertible_to<std::vector<typename G::Element>>;
  { g.abelianization(x) } -> std::convertible_to<Eigen::VectorXd>;
  { g.liouville() } -> std::convertible_to<bool>;
  { g.format(x) } -> std::convertible_to<std::string>;
};

template <WordGroup G>
struct StepDistribution {
  std::vector<typename G::Element> support;
  std::vector<double> weights;
  bool declared_nondegenerate = false;

  void validate(const G& group) const {
    require(!support.empty() && support.size() == weights.size(),
            "step distribution: support and weights must be nonempty and equally long");
    double sum = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      require(weights[i] >= 0.0, "step distribution: negative weight");
      group.check(support[i]);
      sum += weights[i];
    }
    require(std::abs(sum - 1.0) <= 1e-12, "step distribution: weights must sum to 1");
  }

  // Sufficient check: every standard generator carries positive mass.
  bool generates(const G& group) const {
    if (declared_nondegenerate) return true;
    for (const auto& g : group.generators()) {
      bool found = false;
      for (std::size_t i = 0; i < support.size() && !found; ++i)
        found = weights[i] > 0.0 && support[i] == g;
      if (!found) return false;
    }
    return true;
  }

  bool symmetric(const G& group) const {
    for (std::size_t i = 0; i < support.size(); ++i) {
      const auto inv = group.inverse(support[i]);
      double w = 0.0;
      for (std::size_t j = 0; j < support.size(); ++j)
        if (support[j] == inv) w += weights[j];
      double self = 0.0;
      for (std::size_t j = 0; j < support.size(); ++j)
        if (support[j] == support[i]) self += weights[j];
      if (w != self) return false;
    }
    return true;
  }

  std::size_t draw(double u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    for (std::size_t i = weights.size(); i-- > 0;)
      if (weights[i] > 0.0) return i;
    return 0;
  }
};

// Uniform measure on the standard symmetric generating set.
template <WordGroup G>
StepDistribution<G> uniform_generators(const G& group) {
  StepDistribution<G> nu;
  nu.support = group.generators();
  nu.weights.assign(nu.support.size(), 1.0 / static_cast<double>(nu.support.size()));
  return nu;
}

template <WordGroup G>
struct WalkTrajectory {
  std::vector<double> lengths;   // midpoint of the word-length bounds of Z_k, k = 1..n
  double max_half_gap = 0.0;     // largest (hi - lo)/2 along the walk
  double terminal_half_gap = 0.0;
  typename G::Element terminal;
};

// Z_n = g_0 g_1 ... g_{n-1}; step i uses counter i of the seed.
template <WordGroup G>
WalkTrajectory<G> sample_walk(const G& group, const StepDistribution<G>& nu, std::size_t n,
                              std::uint64_t seed) {
  nu.validate(group);
  WalkTrajectory<G> w{{}, 0.0, 0.0, group.identity()};
  w.lengths.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    group.right_multiply(w.terminal, nu.support[nu.draw(rng::uniform(seed, i, 0))]);
    const LengthBounds b = group.length(w.terminal);
    w.lengths.push_back(b.mid());
    w.terminal_half_gap = 0.5 * (b.hi - b.lo);
    w.max_half_gap = std::max(w.max_half_gap, w.terminal_half_gap);
  }
  return w;
}

struct WalkDrift {
  DriftEstimate estimate;  // on the midpoint lengths
  double half_gap = 0.0;   // mean terminal (hi - lo)/2 divided by n
  double error_bar = 0.0;  // terminal_se + half_gap
};

template <WordGroup G>
WalkDrift drift(const G& group, const StepDistribution<G>& nu, std::size_t n, std::size_t trials,
                std::uint64_t seed, std::size_t jobs = 1) {
  require(trials >= 1, "drift: need at least one trial");
  auto walks = parallel_map(trials, jobs, [&](std::size_t t) {
    return sample_walk(group, nu, n, rng::splitmix64(seed + t));
  });
  std::vector<std::vector<double>> series;
  double gap = 0.0;
  for (auto& w : walks) {
    series.push_back(std::move(w.lengths));
    gap += w.terminal_half_gap;
  }
  WalkDrift d;
  d.estimate = estimate_drift(std::span<const std::vector<double>>(series), n);
  d.half_gap = gap / static_cast<double>(trials) / static_cast<double>(n);
  d.error_bar = d.estimate.terminal_se + d.half_gap;
  return d;
}

// Cesaro average over i < n of the laws of Z_i, summarised on a boundary
// chart.  Cells at depth m: on the free group, singletons for words shorter
// than m and depth-m cylinders otherwise; on the lattice, coordinates clamped
// to [-m, m] (so +-m stands for "at least m").  Samples are kept at depth
// m + r (r the longest support element) so the push-forward by any support
// element is computable cell by cell.
struct EmpiricalBoundaryMeasure {
  std::string chart;
  std::size_t depth = 0;
  std::size_t fine_depth = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t samples = 0;
  std::map<std::string, double> cells;  // depth-m cell -> probability
  double stationarity_residual = 0.0;   // sup_C |mu(C) - sum_g nu(g) mu(g^{-1} C)|
  bool positive_drift = true;           // false: flagged, boundary concentration not expected

  struct Fine {
    double mass = 0.0;
    std::vector<std::int64_t> lattice_rep;
    Word word_rep;
  };
  std::map<std::string, Fine> fine;
};

EmpiricalBoundaryMeasure empirical_stationary_measure(const FreeGroup& group,
                                                      const StepDistribution<FreeGroup>& nu,
                                                      std::size_t n, std::size_t trials,
                                                      std::uint64_t seed, std::size_t depth = 4);
EmpiricalBoundaryMeasure empirical_stationary_measure(const IntegerLattice& group,
                                                      const StepDistribution<IntegerLattice>& nu,
                                                      std::size_t n, std::size_t trials,
                                                      std::uint64_t seed, std::size_t depth = 4);

struct FkReport {
  double lhs = 0.0, lhs_se = 0.0;  // drift
  double rhs = 0.0, rhs_se = 0.0;  // integral of h(g^{-1}) d mu d nu
  double difference = 0.0;
  double sigma = 0.0;              // combined standard error
  std::size_t samples = 0;
  bool pass = false;               // |difference| <= 3 sigma
};

// The right-hand side samples a cell from mu_hat and g from nu and evaluates
// h(g^{-1}) = |g x| - |x| on the cell representative x.
FkReport fk_check(const FreeGroup& group, const StepDistribution<FreeGroup>& nu,
                  const EmpiricalBoundaryMeasure& mu, const WalkDrift& lhs,
                  std::size_t samples = 10000, std::uint64_t seed = 7);
FkReport fk_check(const IntegerLattice& group, const StepDistribution<IntegerLattice>& nu,
                  const EmpiricalBoundaryMeasure& mu, const WalkDrift& lhs,
                  std::size_t samples = 10000, std::uint64_t seed = 7);

// T(g) = <c, ab(g)>.  With c in {-1, 1}^k over the abelianization, T is a
// 1-Lipschitz homomorphism for the standard generators.
struct Character {
  Eigen::VectorXd c;
  template <WordGroup G>
  double operator()(const G& group, const typename G::Element& g) const {
    return c.dot(group.abelianization(g));
  }
};

struct CharacterResult {
  Character character;
  double integral = 0.0;  // integral of T d nu
};

// Maximizes the integral over the extreme characters c in {-1, 1}^k: c_i is
// the sign of the mean abelianized step (ties to +1).  Symmetric measures
// give exactly 0 because each pair g, g^{-1} is summed as (w_g - w_{g^-1}) T(g).
template <WordGroup G>
CharacterResult character_drift(const G& group, const StepDistribution<G>& nu) {
  if (!group.liouville())
    throw Error(G::kind() + " is not Liouville: nonconstant bounded nu-harmonic functions exist, "
                "so the drift is not carried by a character");
  nu.validate(group);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(group.abelianization(group.identity()).size());
  for (std::size_t i = 0; i < nu.support.size(); ++i)
    mean += nu.weights[i] * group.abelianization(nu.support[i]);
  CharacterResult r;
  r.character.c = mean.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
  std::vector<bool> used(nu.support.size(), false);
  for (std::size_t i = 0; i < nu.support.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    double w = nu.weights[i];
    const auto inv = group.inverse(nu.support[i]);
    double w_inv = 0.0;
    for (std::size_t j = i + 1; j < nu.support.size(); ++j) {
      if (used[j]) continue;
      if (nu.support[j] == nu.support[i]) {
        w += nu.weights[j];
        used[j] = true;
      } else if (nu.support[j] == inv) {
        w_inv += nu.weights[j];
        used[j] = true;
      }
    }
    r.integral += (w - w_inv) * r.character(group, nu.support[i]);
  }
  return r;
}

// Probability that the simple random walk on F_rank started at g converges to
// an end whose first letter is `letter`.  The walk reaches the identity from
// distance L with probability q^L, q = 1/(2 rank - 1), and from the identity
// every first letter is equally likely.  Bounded, nonconstant, harmonic.
double first_letter_probability(int rank, Letter letter, const Word& g);

// Busemann cocycle c(g, xi) = -h_xi(g^{-1} x0) on the tree, checked on random
// triples against c(g h, xi) = c(g, h xi) + c(h, xi).  Exact in integers.
struct CocycleRelationReport {
  std::size_t samples = 0;
  double worst = 0.0;
  bool pass = false;
};
CocycleRelationReport busemann_cocycle_check(const FreeGroupTree& tree, std::size_t samples,
                                             std::uint64_t seed);

// max over samples g of |f(g) - sum_h nu(h) f(g h)|.
template <WordGroup G>
double harmonicity_residual(const G& group, const StepDistribution<G>& nu,
                            const std::function<double(const typename G::Element&)>& f,
                            const std::vector<typename G::Element>& samples) {
  double worst = 0.0;
  for (const auto& g : samples) {
    double avg = 0.0;
    for (std::size_t i = 0; i < nu.support.size(); ++i)
      avg += nu.weights[i] * f(group.multiply(g, nu.support[i]));
    worst = std::max(worst, std::abs(f(g) - avg));
  }
  return worst;
}

}  // namespace ergolab
