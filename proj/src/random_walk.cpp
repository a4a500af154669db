#include "ergolab/random_walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>

#include "ergolab/model_checks.hpp"

namespace ergolab {

namespace {

std::string coarse_word_key(const Word& x, std::size_t m) {
  if (x.size() < m) return "=" + format_word(x);
  return "[" + format_word(Word(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m)));
}

std::vector<std::int64_t> clamp_vec(const std::vector<std::int64_t>& x, std::int64_t m) {
  std::vector<std::int64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], -m, m);
  return out;
}

std::string lattice_key(const std::vector<std::int64_t>& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s;
}

void finish_measure(EmpiricalBoundaryMeasure& mu, const std::map<std::string, double>& pushed) {
  const double total = static_cast<double>(mu.samples);
  for (auto& [key, f] : mu.fine) f.mass /= total;
  double resid = 0.0;
  for (const auto& [key, p] : mu.cells) {
    auto it = pushed.find(key);
    resid = std::max(resid, std::abs(p - (it == pushed.end() ? 0.0 : it->second)));
  }
  for (const auto& [key, q] : pushed)
    if (!mu.cells.count(key)) resid = std::max(resid, q);
  mu.stationarity_residual = resid;
}

}  // namespace

EmpiricalBoundaryMeasure empirical_stationary_measure(const FreeGroup& group,
                                                      const StepDistribution<FreeGroup>& nu,
                                                      std::size_t n, std::size_t trials,
                                                      std::uint64_t seed, std::size_t depth) {
  nu.validate(group);
  require(n >= 1 && trials >= 1 && depth >= 1, "empirical_stationary_measure: n, trials, depth must be positive");
  std::size_t r = 0;
  for (const auto& g : nu.support) r = std::max(r, g.size());
  EmpiricalBoundaryMeasure mu;
  mu.chart = "free_group cylinders";
  mu.depth = depth;
  mu.fine_depth = depth + std::max<std::size_t>(r, 1);
  mu.n = n;
  mu.trials = trials;
  const std::size_t F = mu.fine_depth;
  double terminal_length = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = rng::splitmix64(seed + t);
    std::deque<Letter> y;  // left walk g_{i-1} ... g_0
    Word prefix;
    for (std::size_t i = 0; i < n; ++i) {
      prefix.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(std::min(F, y.size())));
      const std::string key = (y.size() < F ? "=" : "[") + format_word(prefix);
      auto& cell = mu.fine[key];
      if (cell.mass == 0.0) cell.word_rep = prefix;
      cell.mass += 1.0;
      const Word& g = nu.support[nu.draw(rng::uniform(s, i, 0))];
      for (std::size_t k = g.size(); k-- > 0;) {
        if (!y.empty() && y.front() == -g[k])
          y.pop_front();
        else
          y.push_front(g[k]);
      }
    }
    terminal_length += static_cast<double>(y.size()) / static_cast<double>(n);
  }
  mu.samples = n * trials;
  mu.positive_drift = terminal_length / static_cast<double>(trials) > 0.01;
  std::map<std::string, double> pushed;
  const double total = static_cast<double>(mu.samples);
  for (const auto& [key, f] : mu.fine) {
    mu.cells[coarse_word_key(f.word_rep, depth)] += f.mass / total;
    for (std::size_t j = 0; j < nu.support.size(); ++j)
      pushed[coarse_word_key(multiply(nu.support[j], f.word_rep), depth)] +=
          nu.weights[j] * f.mass / total;
  }
  finish_measure(mu, pushed);
  return mu;
}

EmpiricalBoundaryMeasure empirical_stationary_measure(const IntegerLattice& group,
                                                      const StepDistribution<IntegerLattice>& nu,
                                                      std::size_t n, std::size_t trials,
                                                      std::uint64_t seed, std::size_t depth) {
  nu.validate(group);
  require(n >= 1 && trials >= 1 && depth >= 1, "empirical_stationary_measure: n, trials, depth must be positive");
  std::int64_t r = 0;
  for (const auto& g : nu.support)
    for (auto v : g) r = std::max<std::int64_t>(r, std::llabs(v));
  EmpiricalBoundaryMeasure mu;
  mu.chart = "integer_lattice clamped coordinates";
  mu.depth = depth;
  mu.fine_depth = depth + static_cast<std::size_t>(std::max<std::int64_t>(r, 1));
  mu.n = n;
  mu.trials = trials;
  const auto F = static_cast<std::int64_t>(mu.fine_depth);
  const auto m = static_cast<std::int64_t>(depth);
  double terminal_length = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = rng::splitmix64(seed + t);
    auto y = group.identity();
    for (std::size_t i = 0; i < n; ++i) {
      auto rep = clamp_vec(y, F);
      auto& cell = mu.fine[lattice_key(rep)];
      if (cell.mass == 0.0) cell.lattice_rep = rep;
      cell.mass += 1.0;
      group.right_multiply(y, nu.support[nu.draw(rng::uniform(s, i, 0))]);
    }
    terminal_length += group.length(y).hi / static_cast<double>(n);
  }
  mu.samples = n * trials;
  mu.positive_drift = terminal_length / static_cast<double>(trials) > 0.01;
  std::map<std::string, double> pushed;
  const double total = static_cast<double>(mu.samples);
  for (const auto& [key, f] : mu.fine) {
    mu.cells[lattice_key(clamp_vec(f.lattice_rep, m))] += f.mass / total;
    for (std::size_t j = 0; j < nu.support.size(); ++j)
      pushed[lattice_key(clamp_vec(group.multiply(nu.support[j], f.lattice_rep), m))] +=
          nu.weights[j] * f.mass / total;
  }
  finish_measure(mu, pushed);
  return mu;
}

namespace {

template <class G, class RepOf>
FkReport fk_generic(const G& group, const StepDistribution<G>& nu, const EmpiricalBoundaryMeasure& mu,
                    const WalkDrift& lhs, std::size_t samples, std::uint64_t seed, RepOf rep_of) {
  require(!mu.fine.empty(), "fk_check: empty boundary measure");
  require(samples >= 2, "fk_check: need at least two samples");
  std::vector<double> cum;
  std::vector<const EmpiricalBoundaryMeasure::Fine*> cells;
  double acc = 0.0;
  for (const auto& [key, f] : mu.fine) {
    acc += f.mass;
    cum.push_back(acc);
    cells.push_back(&f);
  }
  rng::Stream s(seed);
  std::vector<double> values(samples);
  for (auto& v : values) {
    const double u = s.uniform() * acc;
    auto idx = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    idx = std::min(idx, cells.size() - 1);
    const auto& x = rep_of(*cells[idx]);
    const auto& g = nu.support[nu.draw(s.uniform())];
    v = group.length(group.multiply(g, x)).mid() - group.length(x).mid();
  }
  const auto ms = stats::mean_se(values);
  FkReport r;
  r.lhs = lhs.estimate.terminal;
  r.lhs_se = lhs.error_bar;
  r.rhs = ms.mean;
  r.rhs_se = ms.se;
  r.samples = samples;
  r.difference = r.lhs - r.rhs;
  r.sigma = std::sqrt(r.lhs_se * r.lhs_se + r.rhs_se * r.rhs_se);
  r.pass = std::abs(r.difference) <= 3.0 * r.sigma + 1e-12;
  return r;
}

}  // namespace

FkReport fk_check(const FreeGroup& group, const StepDistribution<FreeGroup>& nu,
                  const EmpiricalBoundaryMeasure& mu, const WalkDrift& lhs, std::size_t samples,
                  std::uint64_t seed) {
  return fk_generic(group, nu, mu, lhs, samples, seed,
                    [](const EmpiricalBoundaryMeasure::Fine& f) -> const Word& { return f.word_rep; });
}

FkReport fk_check(const IntegerLattice& group, const StepDistribution<IntegerLattice>& nu,
                  const EmpiricalBoundaryMeasure& mu, const WalkDrift& lhs, std::size_t samples,
                  std::uint64_t seed) {
  return fk_generic(group, nu, mu, lhs, samples, seed,
                    [](const EmpiricalBoundaryMeasure::Fine& f) -> const std::vector<std::int64_t>& {
                      return f.lattice_rep;
                    });
}

CocycleRelationReport busemann_cocycle_check(const FreeGroupTree& tree, std::size_t samples,
                                             std::uint64_t seed) {
  rng::Stream s(seed);
  auto c = [&](const Word& g, const End& xi) { return -tree.horofunction(xi, inverse(g)); };
  CocycleRelationReport r;
  r.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const Word g = random_isometry(tree, s), h = random_isometry(tree, s);
    const End xi = random_boundary(tree, s);
    const double gap = c(multiply(g, h), xi) - c(g, tree.act_boundary(h, xi)) - c(h, xi);
    r.worst = std::max(r.worst, std::abs(gap));
  }
  r.pass = r.worst == 0.0;
  return r;
}

double first_letter_probability(int rank, Letter letter, const Word& g) {
  require(rank >= 2, "first_letter_probability: rank must be at least 2");
  const double q = 1.0 / (2.0 * rank - 1.0);
  const double from_root = 1.0 / (2.0 * rank);
  const double back = std::pow(q, static_cast<double>(g.size()));
  if (!g.empty() && g.front() == letter) return 1.0 - back * (1.0 - from_root);
  return back * from_root;
}

}  // namespace ergolab
