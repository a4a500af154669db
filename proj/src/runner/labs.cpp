#include <algorithm>
#include <cmath>
#include <cstdio>
#include <type_traits>

#include "ergolab/boundary.hpp"
#include "ergolab/gauge_ergodic.hpp"
#include "ergolab/model_checks.hpp"
#include "ergolab/oseledets.hpp"
#include "ergolab/random_walk.hpp"
#include "ergolab/step_rules.hpp"
#include "spec.hpp"

namespace ergolab::runner {

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_number(r[i]);
      out += "\n";
    }
    return out;
  }
  std::string dat(std::size_t y) const {
    std::string out = "# " + columns[0] + " " + columns[y] + "\n";
    for (const auto& r : rows) out += format_number(r[0]) + " " + format_number(r[y]) + "\n";
    return out;
  }
};

// Verdicts and outputs of one run.
class Lab {
 public:
  Lab(const Experiment& x, RunReport& r) : x_(x), r_(r) {}

  void verdict(const std::string& check, const std::string& tag, bool pass, double value, double tolerance,
               std::string note = "") {
    add(check, tag, pass ? "pass" : "fail", value, tolerance, std::move(note));
  }
  void flag(const std::string& check, const std::string& tag, double value, std::string note) {
    add(check, tag, "flagged", value, 0.0, std::move(note));
  }
  void emit(const std::string& stem, const Table& t, std::size_t y = 1) {
    r_.series.push_back({x_.name + "_" + stem + ".csv", t.csv()});
    r_.series.push_back({x_.name + "_" + stem + ".dat", t.dat(y)});
  }
  void file(const std::string& name, std::string contents) {
    r_.series.push_back({x_.name + "_" + name, std::move(contents)});
  }
  Json& results() { return r_.results; }

 private:
  void add(const std::string& check, const std::string& tag, std::string status, double value,
           double tolerance, std::string note) {
    const auto it = x_.tags.find(check);
    r_.verdicts.push_back({check, it == x_.tags.end() ? tag : it->second, std::move(status), value, tolerance,
                           std::move(note)});
  }
  const Experiment& x_;
  RunReport& r_;
};

std::uint64_t shifted(std::uint64_t seed, std::int64_t offset) {
  return seed + static_cast<std::uint64_t>(offset);
}

std::vector<std::uint64_t> trial_seeds(const Experiment& x, std::size_t trials, std::int64_t offset) {
  std::vector<std::uint64_t> out;
  for (std::size_t t = 0; t < trials; ++t)
    out.push_back(shifted(x.seeds ? (*x.seeds)[t] : x.driving->seed + t, offset));
  return out;
}

// Rotations ignore the seed; their trials are consecutive orbit segments.
SymbolPath trial_path(const Experiment& x, std::uint64_t seed, std::size_t trial, std::size_t n) {
  DrivingSystem d = *x.driving;
  d.seed = seed;
  const bool rotation = d.kind == DrivingSystem::Kind::irrational_rotation;
  return sample_path(d, n, rotation ? trial * n : 0);
}

MatrixCocycle matrix_cocycle(const MatrixSpec& m) {
  if (m.kind == "constant") return constant_cocycle(m.matrices.at(0));
  if (m.kind == "table") return table_cocycle(m.matrices);
  return rotated_diagonal_cocycle(m.values);
}

template <class M>
constexpr bool kBig = std::is_same_v<typename M::Real, BigReal>;

template <class M>
struct Built {
  std::optional<Trajectory<M>> tr;
  unsigned bits = 0;
};

template <class M, class Rule>
Built<M> build(const M& model, const SymbolPath& path, const Rule& rule, const TrajectoryOptions& opt) {
  if constexpr (kBig<M>) {
    auto ff = compose_far_field(model, path, rule, opt);
    return {std::move(ff.trajectory), ff.bits};
  } else {
    return {compose_trajectory(model, path, rule, opt), 0};
  }
}

template <class M, class Rule>
std::vector<Built<M>> ensemble(const Experiment& x, const M& model, const Rule& rule, std::size_t n,
                               const std::vector<std::uint64_t>& seeds, const TrajectoryOptions& opt,
                               std::size_t jobs) {
  return parallel_map(seeds.size(), kBig<M> ? 1 : jobs, [&](std::size_t t) {
    return build(model, trial_path(x, seeds[t], t, n), rule, opt);
  });
}

template <class M>
unsigned max_bits(const std::vector<Built<M>>& ens) {
  unsigned b = 0;
  for (const auto& e : ens) b = std::max(b, e.bits);
  return b;
}

template <class Fn>
void visit_space(const SpaceSpec& s, Fn&& fn) {
  if (s.model == "euclidean") return fn(Euclidean<double>(s.dim), translation_rule(s.dim));
  if (s.model == "gauged_line") return fn(GaugedLine(s.gauge.build()), line_rule());
  if (s.model == "free_group_tree") return fn(FreeGroupTree(s.rank), generator_rule(s.rank));
  if (s.model == "poincare_disk") return fn(PoincareDisk<BigReal>(), disk_translation_rule<BigReal>());
  fn(PosdefCone<BigReal>(s.dim), posdef_rule<BigReal>(matrix_cocycle(s.cocycle)));
}

Json json_numbers(const std::vector<double>& v) { return Json(v); }

// Cocycle lab

template <class M, class Rule>
void cocycle_lab(const Experiment& x, const RunOptions& o, Lab& lab, const M& model, const Rule& rule) {
  const auto& p = x.cocycle;
  TrajectoryOptions opt;
  opt.dense = p.subadditivity_pairs > 0 || p.record_times.has_value();
  const auto seeds = trial_seeds(x, p.trials, o.seed_offset);
  auto ens = ensemble(x, model, rule, p.depth, seeds, opt, o.jobs);
  std::optional<PrecisionScope> scope;
  if (const unsigned b = max_bits(ens)) scope.emplace(b);

  std::vector<std::vector<double>> series;
  for (const auto& e : ens) series.push_back(e.tr->distances);
  const auto d = estimate_drift(std::span<const std::vector<double>>(series), p.depth);
  auto& res = lab.results();
  res["drift"] = {{"alpha_infimum", d.alpha}, {"argmin", d.argmin}, {"alpha_se", d.alpha_se},
                  {"terminal", d.terminal}, {"terminal_se", d.terminal_se}, {"depth", d.depth},
                  {"trials", d.trials}, {"estimator", p.estimator}};

  const bool infimum = p.estimator == "infimum";
  const double estimate = infimum ? d.alpha : d.terminal;
  if (p.expect) {
    const double gap = std::abs(estimate - p.expect->value);
    lab.verdict(infimum ? "drift_infimum" : "drift", infimum ? "Eq alpha" : "Prop 6",
                gap <= p.expect->tolerance, gap, p.expect->tolerance,
                "estimate " + format_number(estimate) + " vs " + format_number(p.expect->value));
  }
  if constexpr (std::is_same_v<M, Euclidean<double>>) {
    if (p.birkhoff) {
      std::vector<double> signed_avg;
      for (const auto& e : ens) signed_avg.push_back(e.tr->terminal(0) / static_cast<double>(p.depth));
      const auto ms = stats::mean_se(signed_avg);
      const double gap = std::abs(ms.mean - p.birkhoff->value);
      res["birkhoff"] = {{"mean", ms.mean}, {"se", ms.se}};
      lab.verdict("birkhoff", "Thm 2", gap <= p.birkhoff->tolerance, gap, p.birkhoff->tolerance,
                  "signed average S_N / N " + format_number(ms.mean));
    }
  }
  const double kingman_tol = 5.0 * std::hypot(d.terminal_se, d.alpha_se);
  const double kingman_gap = std::abs(d.terminal - d.alpha);
  lab.verdict("kingman", "Thm 3", kingman_gap <= kingman_tol, kingman_gap, kingman_tol,
              "terminal mean against the infimum of mean_n / n");

  if (p.subadditivity_pairs > 0 || p.record_times) {
    const auto S = trajectory_cocycle(*ens.front().tr);
    if (p.subadditivity_pairs > 0) {
      const auto s = check_subadditivity(S, p.subadditivity_pairs, seeds.front());
      res["subadditivity"] = {{"pairs", s.pairs}, {"max_violation", s.max_violation},
                              {"worst_n", s.worst_n}, {"worst_m", s.worst_m}};
      lab.verdict("subadditivity", "Thm 3", s.pass, s.max_violation, 1e-9);
    }
    if (p.record_times) {
      const auto [eps, K] = *p.record_times;
      const auto times = record_times(S, estimate, {eps, K, p.depth});
      // Brute-force recheck of the last few instants.
      double worst = INFINITY;
      const std::size_t from = times.size() > 20 ? times.size() - 20 : 0;
      for (std::size_t i = from; i < times.size(); ++i) {
        const std::size_t n = times[i];
        for (std::size_t k = K; k <= n; ++k)
          worst = std::min(worst, S.at(n) - S.at_shift(k, n - k) - (estimate - eps) * static_cast<double>(k));
      }
      res["record_times"] = {{"count", times.size()}, {"epsilon", eps}, {"K", K}, {"alpha", estimate},
                             {"first", times.empty() ? 0 : times.front()},
                             {"last", times.empty() ? 0 : times.back()},
                             {"recheck_margin", times.empty() ? 0.0 : worst}};
      lab.verdict("record_times", "Lemma 4", !times.empty() && (times.empty() || worst >= -1e-9),
                  static_cast<double>(times.size()), 0.0, "number of record instants in [K, N]");
    }
  }

  Table t{{"n", "mean_over_n", "se_over_n"}, {}};
  for (std::size_t n : stats::geometric_checkpoints(p.depth, 60)) {
    const double nn = static_cast<double>(n);
    t.rows.push_back({nn, d.mean[n - 1] / nn, d.se[n - 1] / nn});
  }
  lab.emit("cocycle", t);
}

// Boundary lab

template <class M, class Rule>
void boundary_lab(const Experiment& x, const RunOptions& o, Lab& lab, const M& model, const Rule& rule) {
  const auto& p = x.boundary;
  const std::size_t N = p.depth;
  const std::size_t stride = p.stride ? p.stride : std::max<std::size_t>(1, N / 50);
  TrajectoryOptions opt;
  for (std::size_t k = stride; k <= 2 * N; k += stride) opt.checkpoints.push_back(k);
  opt.checkpoints.push_back(N);
  opt.checkpoints.push_back(2 * N);
  const auto seeds = trial_seeds(x, p.trials, o.seed_offset);
  auto ens = ensemble(x, model, rule, 2 * N, seeds, opt, o.jobs);
  std::optional<PrecisionScope> scope;
  if (const unsigned b = max_bits(ens)) scope.emplace(b);

  const double nn = static_cast<double>(N);
  std::vector<double> bN;
  for (const auto& e : ens) bN.push_back(e.tr->distance(N) / nn);
  const double se = stats::mean_se(bN).se;
  auto& res = lab.results();
  res["depth"] = N;
  res["fit_depth"] = 2 * N;
  res["trials"] = ens.size();
  res["b_N"] = json_numbers(bN);
  res["b_N_se"] = se;

  constexpr bool line = std::is_same_v<M, GaugedLine>;
  if constexpr (!line) {
    for (const auto& e : ens) {
      const double a = e.tr->distance(2 * N) / (2.0 * nn);
      if (!(a > 0.01)) {
        lab.flag("main_theorem", "Thm 8", a,
                 "sublinear regime (drift estimate " + format_number(a) + "): no limiting direction");
        return;
      }
    }
  }

  std::vector<double> residual, wrong_gap, eN, chart;
  std::vector<std::vector<double>> a_series, b_series, e_series;
  std::vector<std::size_t> depths;
  double tolerance = 0.0;
  bool ray_bound = true, stable = true;
  for (const auto& e : ens) {
    const auto& tr = *e.tr;
    typename M::Boundary xi{};
    if constexpr (!line) xi = estimate_direction(tr, 0.01, 2 * N).xi;
    const auto m = verify_main_theorem(tr, xi, se, N);
    residual.push_back(m.residual);
    tolerance = m.tolerance;
    depths = m.depths;
    a_series.push_back(m.a);
    b_series.push_back(m.b);
    if constexpr (!line) {
      if (p.wrong_direction)
        wrong_gap.push_back(verify_main_theorem(tr, model.far_boundary(xi), se, N).residual - m.residual);
      const auto r = ray_error(tr, xi, tr.distance(2 * N) / (2.0 * nn), N);
      eN.push_back(r.error.back());
      e_series.push_back(r.error);
      ray_bound = ray_bound && r.bound_ok;
      if (p.stability) {
        const auto s = direction_stability(tr, N);
        chart.push_back(s.chart_distance);
        stable = stable && s.stable;
      }
    }
  }

  const double worst = *std::max_element(residual.begin(), residual.end());
  res["main_theorem"] = {{"residual", residual}, {"tolerance", tolerance}};
  lab.verdict("main_theorem", "Thm 8", worst <= tolerance, worst, tolerance,
              "max over trials of |a_N - b_N|");

  auto column_mean = [](const std::vector<std::vector<double>>& s, std::size_t i) {
    double v = 0.0;
    for (const auto& row : s) v += row[i];
    return v / static_cast<double>(s.size());
  };
  Table t{{"n", "a_n", "b_n", "abs_gap"}, {}};
  if constexpr (!line) t.columns.push_back("e_n");
  std::vector<double> xs, e_mean;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const double a = column_mean(a_series, i), b = column_mean(b_series, i);
    t.rows.push_back({static_cast<double>(depths[i]), a, b, std::abs(a - b)});
    if constexpr (!line) {
      e_mean.push_back(column_mean(e_series, i));
      t.rows.back().push_back(e_mean.back());
      xs.push_back(static_cast<double>(depths[i]));
    }
  }
  lab.emit("boundary", t, 3);

  if constexpr (!line) {
    if (p.wrong_direction) {
      const double least = *std::min_element(wrong_gap.begin(), wrong_gap.end());
      res["wrong_direction"] = {{"residual_increase", wrong_gap}};
      lab.verdict("wrong_direction", "Thm 8", least > 0.0, least, 0.0,
                  "smallest residual increase under a far chart");
    }
    const bool disk_or_tree = std::is_same_v<M, PoincareDisk<BigReal>> || std::is_same_v<M, FreeGroupTree>;
    const double tol = p.ray_tolerance > 0 ? p.ray_tolerance
                                           : (std::is_same_v<M, PoincareDisk<BigReal>> ? 0.1 : 0.05);
    const double e_final = e_mean.back();
    const bool exact = std::all_of(e_mean.begin(), e_mean.end(), [](double v) { return v == 0.0; });
    const double slope = exact ? 0.0 : stats::loglog_slope(xs, e_mean);
    res["ray_error"] = {{"e_N", eN}, {"mean_e_N", e_final}, {"slope", slope}, {"bound_ok", ray_bound}};
    lab.verdict("ray_error", disk_or_tree ? "Cor 13" : "Cor 10", e_final < tol && (exact || slope < 0.0),
                e_final, tol, "mean e_N, log-log slope " + format_number(slope));
    Table r{{"n", "e_n"}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) r.rows.push_back({xs[i], e_mean[i]});
    lab.emit("ray", r);
    if (p.stability) {
      const double worst_chart = *std::max_element(chart.begin(), chart.end());
      res["direction_stability"] = {{"chart_distance", chart}};
      lab.verdict("direction_stability", "Cor 11", stable, worst_chart,
                  std::is_same_v<M, FreeGroupTree> ? std::ldexp(1.0, -static_cast<int>(N / 4)) : 0.1,
                  "chart distance between the estimates at N and 2N");
    }
    if constexpr (std::is_same_v<M, Euclidean<double>>) {
      if (p.birkhoff) {
        std::vector<double> values;
        for (const auto& e : ens) values.push_back(birkhoff_from_boundary(*e.tr).value);
        const double v = stats::mean_se(values).mean;
        const double gap = std::abs(v - p.birkhoff->value);
        res["birkhoff"] = {{"values", values}, {"mean", v}};
        lab.verdict("birkhoff_sign", "Birkhoff sign", gap <= p.birkhoff->tolerance, gap,
                    p.birkhoff->tolerance, "signed average " + format_number(v));
      }
    }
  }
}

// Oseledets lab

void oseledets_lab(const Experiment& x, const RunOptions& o, Lab& lab) {
  const auto& p = x.oseledets;
  const auto coc = matrix_cocycle(x.space->cocycle);
  const auto seed = trial_seeds(x, 1, o.seed_offset).front();
  const auto path = trial_path(x, seed, 0, p.n);
  const auto sp = lyapunov_spectrum(coc, path, p.reorth_stride, p.moment_bound);
  auto& res = lab.results();
  const std::vector<double> mu(sp.mu.data(), sp.mu.data() + sp.mu.size());
  res["spectrum"] = {{"mu", mu}, {"lambda", sp.lambda}, {"multiplicity", sp.multiplicity},
                     {"det_average", sp.det_average}, {"moment", sp.moment}, {"n", p.n},
                     {"gap_threshold", sp.gap_threshold}, {"warnings", sp.warnings}};
  if (!sp.warnings.empty()) lab.flag("moment_guard", "Thm 12", sp.moment, sp.warnings.front());

  const auto omet = verify_omet(coc, sp, path, p.eps);
  res["omet"] = {{"eps", omet.eps}, {"n0", omet.n0 ? Json(*omet.n0) : Json(nullptr)},
                 {"worst_excess", omet.worst_excess}, {"flag_angle", omet.flag_angle},
                 {"precision_bits", omet.precision_bits}};
  lab.verdict("omet", "Thm 12", omet.entries_pass, omet.worst_excess.empty() ? 0.0 : omet.worst_excess.back(),
              0.0, omet.n0 ? "bounds hold from n0 = " + std::to_string(*omet.n0) : "no n0 <= N/2");
  lab.verdict("determinant", "Thm 12", omet.det_residual <= p.det_tolerance, omet.det_residual,
              p.det_tolerance, "|(1/N) ln|det A^(N)| - sum mu|");

  const auto inv = lyapunov_spectrum(inverse_cocycle(coc), reversed(path), p.reorth_stride);
  double sym = 0.0;
  const Eigen::Index d = sp.mu.size();
  for (Eigen::Index i = 0; i < d; ++i) sym = std::max(sym, std::abs(inv.mu(i) + sp.mu(d - 1 - i)));
  lab.verdict("inversion_symmetry", "Thm 12", sym <= p.symmetry_tolerance, sym, p.symmetry_tolerance,
              "inverse cocycle along the reversed path");

  if (p.expect_mu) {
    double gap = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
      gap = std::max(gap, std::abs(sp.mu(i) - p.expect_mu->at(static_cast<std::size_t>(i))));
    lab.verdict("spectrum", "Thm 12", gap <= p.expect_tolerance, gap, p.expect_tolerance);
  }
  if (p.oracle) {
    const auto [trials, n] = *p.oracle;
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(d);
    for (std::size_t t = 0; t < trials; ++t)
      avg += product_exponents(coc, trial_path(x, seed + 1000 + t, t, n));
    avg /= static_cast<double>(trials);
    const double gap = (avg - sp.mu).cwiseAbs().maxCoeff();
    res["oracle"] = {{"mu", std::vector<double>(avg.data(), avg.data() + d)}, {"trials", trials}, {"n", n}};
    lab.verdict("oracle", "Thm 12", gap <= p.oracle_tolerance, gap, p.oracle_tolerance,
                "against exact products in extended precision");
  }
  if (p.ray_matrix) {
    auto ff = compose_far_field(PosdefCone<BigReal>(x.space->dim), path, posdef_rule<BigReal>(coc));
    PrecisionScope scope(ff.bits);
    const double drift = ff.trajectory.distance(p.n) / static_cast<double>(p.n);
    double gap = 0.0;
    std::vector<double> ev;
    if (drift > 0.01) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ray_matrix(ff.trajectory));
      for (Eigen::Index i = 0; i < d; ++i) {
        ev.push_back(eig.eigenvalues()(d - 1 - i));
        gap = std::max(gap, std::abs(ev.back() - sp.mu(i)));
      }
      res["ray_matrix"] = {{"eigenvalues", ev}, {"drift", drift}, {"two_norm_mu", 2.0 * sp.mu.norm()}};
      lab.verdict("ray_matrix", "Cor 10", gap <= p.ray_tolerance, gap, p.ray_tolerance,
                  "eigenvalues of log(Z_n x0) / 2n against mu");
    } else {
      lab.flag("ray_matrix", "Cor 10", drift, "sublinear regime: no ray");
    }
  }

  Table t{{"n"}, {}};
  for (Eigen::Index i = 0; i < d; ++i) t.columns.push_back("mu_" + std::to_string(i + 1));
  t.columns.push_back("det_residual");
  for (const auto& h : sp.history) {
    std::vector<double> row{static_cast<double>(h.n)};
    for (Eigen::Index i = 0; i < d; ++i) row.push_back(h.mu(i));
    row.push_back(h.det_residual);
    t.rows.push_back(row);
  }
  lab.emit("spectrum", t);
}

// Walk lab

template <WordGroup G>
StepDistribution<G> step_distribution(const G& g, const StepSpec& s) {
  if (s.uniform) return uniform_generators(g);
  StepDistribution<G> nu;
  for (std::size_t i = 0; i < s.support.size(); ++i) {
    try {
      nu.support.push_back(g.parse(s.support[i]));
    } catch (const Error& e) {
      throw SchemaError("config.walk.steps.support[" + std::to_string(i) + "]: " + e.what());
    }
  }
  nu.weights = s.weights;
  try {
    nu.validate(g);
  } catch (const Error& e) {
    throw SchemaError(std::string("config.walk.steps: ") + e.what());
  }
  return nu;
}

template <class Fn>
void visit_group(const GroupSpec& g, Fn&& fn) {
  if (g.kind == "integer_lattice") return fn(IntegerLattice(g.dim));
  if (g.kind == "free_group") return fn(FreeGroup(g.rank));
  fn(Heisenberg(g.radius));
}

template <WordGroup G>
void walk_lab(const Experiment& x, const RunOptions& o, Lab& lab, const G& group) {
  const auto& p = x.walk;
  const auto nu = step_distribution(group, p.steps);
  const std::uint64_t seed = shifted(p.seed, o.seed_offset);
  auto& res = lab.results();
  auto wants = [&](const char* c) { return std::find(p.checks.begin(), p.checks.end(), c) != p.checks.end(); };
  res["symmetric"] = nu.symmetric(group);
  res["generates"] = nu.generates(group);

  std::optional<WalkDrift> d;
  auto get_drift = [&]() -> const WalkDrift& {
    if (!d) {
      d = drift(group, nu, p.n, p.trials, seed, o.jobs);
      res["drift"] = {{"terminal", d->estimate.terminal}, {"terminal_se", d->estimate.terminal_se},
                      {"alpha_infimum", d->estimate.alpha}, {"half_gap", d->half_gap},
                      {"error_bar", d->error_bar}, {"n", p.n}, {"trials", p.trials}};
      Table t{{"n", "mean_over_n", "se_over_n"}, {}};
      for (std::size_t n : stats::geometric_checkpoints(p.n, 60)) {
        const double nn = static_cast<double>(n);
        t.rows.push_back({nn, d->estimate.mean[n - 1] / nn, d->estimate.se[n - 1] / nn});
      }
      lab.emit("drift", t);
    }
    return *d;
  };

  if (wants("drift")) {
    const auto& w = get_drift();
    if (p.expect) {
      const double gap = std::abs(w.estimate.terminal - p.expect->value);
      lab.verdict("drift", "Prop 6", gap <= p.expect->tolerance, gap, p.expect->tolerance,
                  "terminal " + format_number(w.estimate.terminal));
    }
  }

  if constexpr (std::is_same_v<G, FreeGroup> || std::is_same_v<G, IntegerLattice>) {
    std::optional<EmpiricalBoundaryMeasure> mu;
    auto measure = [&]() -> const EmpiricalBoundaryMeasure& {
      if (!mu) {
        mu = empirical_stationary_measure(group, nu, p.measure_n, p.measure_trials, seed + 1, p.measure_depth);
        std::string csv = "cell,probability\n";
        for (const auto& [cell, q] : mu->cells) csv += "\"" + cell + "\"," + format_number(q) + "\n";
        lab.file("measure.csv", csv);
        res["measure"] = {{"chart", mu->chart}, {"depth", mu->depth}, {"n", mu->n}, {"trials", mu->trials},
                          {"samples", mu->samples}, {"stationarity_residual", mu->stationarity_residual},
                          {"positive_drift", mu->positive_drift}};
      }
      return *mu;
    };
    if (wants("fk")) {
      const auto fk = fk_check(group, nu, measure(), get_drift(), p.fk_samples, seed + 2);
      res["fk"] = {{"lhs", fk.lhs}, {"lhs_se", fk.lhs_se}, {"rhs", fk.rhs}, {"rhs_se", fk.rhs_se},
                   {"difference", fk.difference}, {"sigma", fk.sigma}, {"samples", fk.samples}};
      lab.verdict("fk", "Thm 19", fk.pass, std::abs(fk.difference), 3.0 * fk.sigma,
                  "drift against the boundary integral");
    }
    if (wants("stationarity")) {
      const std::size_t sn = p.stationarity_n ? p.stationarity_n : p.measure_n;
      const std::size_t st = p.stationarity_trials ? p.stationarity_trials : p.measure_trials;
      const auto once = empirical_stationary_measure(group, nu, sn, st, seed + 5, p.measure_depth);
      const auto twice = empirical_stationary_measure(group, nu, 2 * sn, st, seed + 5, p.measure_depth);
      const double a = once.stationarity_residual, b = twice.stationarity_residual;
      res["stationarity"] = {{"n", sn}, {"trials", st}, {"residual_n", a}, {"residual_2n", b}};
      lab.verdict("stationarity", "Thm 19", b < a || (a == 0.0 && b == 0.0), b, a,
                  "residual at 2n against the residual at n");
    }
  }

  if (wants("character")) {
    try {
      const auto ch = character_drift(group, nu);
      const std::vector<double> c(ch.character.c.data(), ch.character.c.data() + ch.character.c.size());
      res["character"] = {{"c", c}, {"integral", ch.integral}};
      if (nu.symmetric(group)) {
        lab.verdict("character", "Cor 20", ch.integral == 0.0, ch.integral, 0.0,
                    "symmetric steps: the integral vanishes exactly");
      } else {
        const auto& w = get_drift();
        const double gap = std::abs(w.estimate.terminal - ch.integral);
        lab.verdict("character", "Cor 20", gap <= 3.0 * w.error_bar, gap, 3.0 * w.error_bar,
                    "drift against the integral of the character");
      }
      if constexpr (std::is_same_v<G, IntegerLattice>) {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(group.dim());
        for (std::size_t i = 0; i < nu.support.size(); ++i)
          m += nu.weights[i] * group.abelianization(nu.support[i]);
        res["character"]["mean_l1"] = m.lpNorm<1>();
      }
    } catch (const Error& e) {
      lab.flag("character", "Cor 20", 0.0, e.what());
    }
  }

  if constexpr (std::is_same_v<G, FreeGroup>) {
    if (wants("harmonic")) {
      rng::Stream s(seed + 3);
      std::vector<Word> samples;
      for (std::size_t c = 0; c < p.harmonic_samples; ++c) samples.push_back(random_word(group.rank(), 12, s));
      const int rank = group.rank();
      auto f = [rank](const Word& g) { return first_letter_probability(rank, 1, g); };
      const double r = harmonicity_residual<FreeGroup>(group, nu, f, samples);
      const double spread = f(Word(8, 1)) - f(Word(8, 2));
      res["harmonic"] = {{"residual", r}, {"spread", spread}, {"samples", samples.size()}};
      lab.verdict("harmonic", "Cor 21", r <= 1e-9 && spread > 0.5, r, 1e-9,
                  "bounded nonconstant harmonic function (first-letter hitting probability)");
    }
    if (wants("cocycle_relation")) {
      const auto c = busemann_cocycle_check(FreeGroupTree(group.rank()), p.harmonic_samples, seed + 4);
      res["cocycle_relation"] = {{"samples", c.samples}, {"worst", c.worst}};
      lab.verdict("cocycle_relation", "Eq cocycle", c.pass, c.worst, 0.0,
                  "c(gh, xi) = c(g, h xi) + c(h, xi) for the Busemann cocycle");
    }
  }

  if constexpr (std::is_same_v<G, Heisenberg>) {
    if (wants("growth")) {
      std::vector<double> rates;
      bool decreasing = true;
      Table t{{"n", "log_ball_over_n"}, {}};
      for (std::size_t n = 1; n <= p.growth_radius; ++n) {
        const double rate = std::log(static_cast<double>(group.ball_count(static_cast<int>(n)))) /
                            static_cast<double>(n);
        decreasing = decreasing && (rates.empty() || rate < rates.back());
        rates.push_back(rate);
        t.rows.push_back({static_cast<double>(n), rate});
      }
      lab.emit("growth", t);
      res["growth"] = {{"rates", rates}};
      lab.verdict("growth", "Cor 22", decreasing, rates.back(), rates.front(),
                  "ln |B(n)| / n decreases on the exact ball");
    }
  }

  if (wants("centered")) {
    const auto& w = get_drift();
    lab.verdict("centered_drift", "Cor 22", w.estimate.terminal <= p.centered_tolerance, w.estimate.terminal,
                p.centered_tolerance, nu.symmetric(group) ? "symmetric steps" : "steps are not symmetric");
  }
}

// Gauge lab

void gauge_lab(const Experiment& x, const RunOptions& o, Lab& lab) {
  const auto& p = x.gauge;
  GaugeCheckOptions opt;
  opt.n = p.n;
  opt.trials = p.trials;
  opt.seed = shifted(p.seed, o.seed_offset);
  opt.guard_threshold = p.guard_threshold;
  opt.jobs = o.jobs;
  auto& res = lab.results();
  auto wants = [&](const char* c) { return std::find(p.checks.begin(), p.checks.end(), c) != p.checks.end(); };

  auto record = [&](const std::string& check, const std::string& tag, const GaugeCheckReport& r,
                    double tolerance, const std::string& what) {
    res[check] = {{"terminal", r.terminal}, {"slope", r.slope}, {"tail_index", r.tail_index},
                  {"guard_tripped", r.guard_tripped}, {"skipped", r.skipped}, {"n", opt.n},
                  {"trials", opt.trials}};
    if (r.status == "flagged")
      lab.flag(check, tag, r.terminal, r.note);
    else
      lab.verdict(check, tag, r.pass, r.terminal, tolerance, what + ", slope " + format_number(r.slope));
    Table t{{"n", "median", "mean"}, {}};
    for (std::size_t i = 0; i < r.depths.size(); ++i)
      t.rows.push_back({static_cast<double>(r.depths[i]), r.median[i], r.mean[i]});
    lab.emit(check, t);
  };

  if (wants("aaronson"))
    record("aaronson", "Thm 14", aaronson_check(p.f, p.D.build(), opt), 0.02, "median D(|S_n|)/n at n");

  if (wants("aaronson_weiss") || wants("regularization")) {
    const RawGauge raw = p.raw->build();
    const GaugeFunction D = regularize_gauge(raw);
    const auto b = check_regularization(raw, D, gauge_probe_grid());
    res["regularization"] = {{"raw", raw.name}, {"worst_lower", b.worst_lower}, {"worst_upper", b.worst_upper}};
    if (wants("regularization"))
      lab.verdict("regularization", "Cor 15", b.pass, std::max(b.worst_lower, b.worst_upper), 0.0,
                  "d <= D <= 2d on the probe grid");
    if (wants("aaronson_weiss"))
      record("aaronson_weiss", "Cor 15", aaronson_check(p.f, D, opt), 0.02,
             "median D(|S_n|)/n with D regularized from d");
  }

  if (wants("mz")) record("mz", "Cor L^p", mz_check(p.p, p.f, opt), 0.02, "median |S_n| / n^(1/p)");
  if (wants("log")) record("log", "Cor log", log_check(p.f, opt), 0.01, "median |S_n|^(1/n), distance to 1");

  if (wants("trivial_boundary")) {
    std::vector<double> xs;
    for (std::size_t k = 1; k <= p.probe_count; ++k) xs.push_back(std::pow(p.probe_base, static_cast<double>(k)));
    const auto r = trivial_boundary_check(p.D.build(), xs);
    res["trivial_boundary"] = {{"x", r.x}, {"sup", r.sup}};
    lab.verdict("trivial_boundary", "Gauge metric", r.pass, r.terminal, 1e-3,
                "sup over |z| <= 10 of |D(|x_n - z|) - D(x_n)|");
    Table t{{"x", "sup"}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({xs[i], r.sup[i]});
    lab.emit("trivial_boundary", t);
  }
}

}  // namespace

void validate_experiment(const Experiment& x) {
  if (x.driving) {
    const std::size_t w = x.driving->width();
    const auto& s = *x.space;
    std::size_t need = 1;
    if (s.model == "euclidean") need = static_cast<std::size_t>(s.dim);
    if (s.model == "poincare_disk") need = 2;
    if (w < need)
      throw SchemaError("config.driving: symbols have width " + std::to_string(w) + ", the " + s.model +
                        " step rule needs " + std::to_string(need));
    if (s.model == "posdef_cone") matrix_cocycle(s.cocycle);
  }
  if (x.lab == "walk") {
    const auto& g = *x.group;
    visit_group(g, [&](const auto& group) { step_distribution(group, x.walk.steps); });
    for (std::size_t i = 0; i < x.walk.checks.size(); ++i) {
      const std::string& c = x.walk.checks[i];
      const std::string where = "config.walk.checks[" + std::to_string(i) + "]: ";
      if ((c == "fk" || c == "stationarity") && g.kind == "heisenberg")
        throw SchemaError(where + c + " needs free_group or integer_lattice");
      if ((c == "harmonic" || c == "cocycle_relation") && g.kind != "free_group")
        throw SchemaError(where + c + " needs free_group");
      if (c == "harmonic" && !x.walk.steps.uniform)
        throw SchemaError(where + "harmonic needs uniform steps");
      if (c == "growth" && g.kind != "heisenberg") throw SchemaError(where + "growth needs heisenberg");
      if (c == "growth" && static_cast<int>(x.walk.growth_radius) > g.radius)
        throw SchemaError("config.walk.growth_radius: exceeds the exact ball radius " + std::to_string(g.radius));
    }
  }
}

void run_lab(const Experiment& x, const RunOptions& o, RunReport& report) {
  Lab lab(x, report);
  if (x.lab == "cocycle") {
    visit_space(*x.space, [&](const auto& model, const auto& rule) { cocycle_lab(x, o, lab, model, rule); });
  } else if (x.lab == "boundary") {
    visit_space(*x.space, [&](const auto& model, const auto& rule) { boundary_lab(x, o, lab, model, rule); });
  } else if (x.lab == "oseledets") {
    oseledets_lab(x, o, lab);
  } else if (x.lab == "walk") {
    visit_group(*x.group, [&](const auto& group) { walk_lab(x, o, lab, group); });
  } else {
    gauge_lab(x, o, lab);
  }
}

}  // namespace ergolab::runner
