#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spec.hpp"

namespace ergolab::runner {

Node Node::at(const std::string& key) const {
  if (!j_->is_object()) fail("expected an object");
  if (!j_->contains(key)) throw SchemaError(path_ + "." + key + ": required field missing");
  return Node((*j_)[key], path_ + "." + key);
}

std::optional<Node> Node::find(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return at(key);
}

std::vector<Node> Node::items(const std::string& key) const {
  const Node a = at(key);
  if (!a.json().is_array()) a.fail("expected an array");
  std::vector<Node> out;
  for (std::size_t i = 0; i < a.json().size(); ++i)
    out.emplace_back(a.json()[i], a.path() + "[" + std::to_string(i) + "]");
  return out;
}

void Node::allow(std::initializer_list<const char*> known) const {
  if (!j_->is_object()) fail("expected an object");
  for (auto it = j_->begin(); it != j_->end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw SchemaError(path_ + "." + it.key() + ": unknown field");
  }
}

double Node::number(const std::string& key) const {
  const Node n = at(key);
  if (!n.json().is_number()) n.fail("expected a number");
  const double v = n.json().get<double>();
  if (!std::isfinite(v)) n.fail("expected a finite number");
  return v;
}

double Node::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::size_t Node::count(const std::string& key) const {
  const Node n = at(key);
  if (!n.json().is_number_integer() || n.json().get<std::int64_t>() < 1)
    n.fail("expected a positive integer");
  return n.json().get<std::size_t>();
}

std::size_t Node::count(const std::string& key, std::size_t fallback) const {
  return has(key) ? count(key) : fallback;
}

std::uint64_t Node::seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const Node n = at(key);
  if (!n.json().is_number_unsigned() && !(n.json().is_number_integer() && n.json().get<std::int64_t>() >= 0))
    n.fail("expected a nonnegative integer");
  return n.json().get<std::uint64_t>();
}

std::string Node::text(const std::string& key) const {
  const Node n = at(key);
  if (!n.json().is_string()) n.fail("expected a string");
  return n.json().get<std::string>();
}

std::string Node::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

bool Node::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Node n = at(key);
  if (!n.json().is_boolean()) n.fail("expected true or false");
  return n.json().get<bool>();
}

std::vector<double> Node::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const Node& n : items(key)) {
    if (!n.json().is_number()) n.fail("expected a number");
    out.push_back(n.json().get<double>());
  }
  return out;
}

std::vector<std::string> Node::texts(const std::string& key) const {
  std::vector<std::string> out;
  for (const Node& n : items(key)) {
    if (!n.json().is_string()) n.fail("expected a string");
    out.push_back(n.json().get<std::string>());
  }
  return out;
}

Eigen::MatrixXd Node::matrix(const std::string& key) const { return at(key).as_matrix(); }

Eigen::MatrixXd Node::as_matrix() const {
  if (!j_->is_array() || j_->empty()) fail("expected a nonempty square matrix");
  const auto d = static_cast<Eigen::Index>(j_->size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Json& r = (*j_)[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != d)
      fail("row " + std::to_string(i) + " must have length " + std::to_string(d));
    for (Eigen::Index j = 0; j < d; ++j) {
      const Json& v = r[static_cast<std::size_t>(j)];
      if (!v.is_number()) fail("expected numbers");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

namespace {

template <class Fn>
auto checked(const Node& n, Fn&& fn) {
  try {
    return fn();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

std::string one_of(const Node& n, const std::string& key, std::initializer_list<const char*> options,
                    const char* fallback = nullptr) {
  if (fallback && !n.has(key)) return fallback;
  const std::string v = n.text(key);
  for (const char* o : options)
    if (v == o) return v;
  std::string list;
  for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
  n.at(key).fail("'" + v + "' is not one of " + list);
}

ScalarDist parse_dist(const Node& n) {
  const std::string kind =
      one_of(n, "dist", {"constant", "uniform", "normal", "choice", "sym_pareto", "exp_cauchy"});
  ScalarDist d;
  if (kind == "constant") {
    n.allow({"dist", "value"});
    d = ScalarDist::constant(n.number("value"));
  } else if (kind == "uniform") {
    n.allow({"dist", "lo", "hi"});
    d = ScalarDist::uniform(n.number("lo"), n.number("hi"));
  } else if (kind == "normal") {
    n.allow({"dist", "mean", "sd"});
    d = ScalarDist::normal(n.number("mean", 0.0), n.number("sd", 1.0));
  } else if (kind == "choice") {
    n.allow({"dist", "values", "weights"});
    d = ScalarDist::choice(n.numbers("values"), n.numbers("weights"));
  } else if (kind == "sym_pareto") {
    n.allow({"dist", "tail", "scale"});
    d = ScalarDist::sym_pareto(n.number("tail"), n.number("scale", 1.0));
  } else {
    n.allow({"dist", "location", "scale"});
    d = ScalarDist::exp_cauchy(n.number("location", 0.0), n.number("scale", 1.0));
  }
  checked(n, [&] { d.validate(); return 0; });
  return d;
}

DrivingSystem parse_driving(const Node& n) {
  n.allow({"kind", "seed", "params"});
  const std::string kind = one_of(n, "kind", {"iid", "irrational_rotation", "finite_markov"});
  const std::uint64_t seed = n.seed("seed", 1);
  const Node p = n.at("params");
  DrivingSystem sys;
  if (kind == "iid") {
    p.allow({"components"});
    std::vector<ScalarDist> comps;
    for (const Node& c : p.items("components")) comps.push_back(parse_dist(c));
    if (comps.empty()) p.at("components").fail("need at least one component");
    sys = DrivingSystem::iid(std::move(comps), seed);
  } else if (kind == "irrational_rotation") {
    p.allow({"theta", "x0"});
    sys = DrivingSystem::rotation(p.number("theta"), p.number("x0", 0.0));
  } else {
    p.allow({"transition", "initial"});
    const auto init = p.numbers("initial");
    sys = DrivingSystem::markov(p.matrix("transition"),
                                Eigen::Map<const Eigen::VectorXd>(init.data(), static_cast<Eigen::Index>(init.size())),
                                seed);
  }
  checked(p, [&] { sys.validate(); return 0; });
  return sys;
}

std::vector<std::pair<double, double>> parse_knots(const Node& n, const std::string& key) {
  std::vector<std::pair<double, double>> knots;
  for (const Node& k : n.items(key)) {
    if (!k.json().is_array() || k.json().size() != 2 || !k.json()[0].is_number() || !k.json()[1].is_number())
      k.fail("expected a [t, D] pair");
    knots.emplace_back(k.json()[0].get<double>(), k.json()[1].get<double>());
  }
  return knots;
}

GaugeSpec parse_gauge(const Node& n) {
  n.allow({"kind", "p", "knots", "csv"});
  GaugeSpec g;
  g.kind = one_of(n, "kind", {"power", "log1p", "table"});
  if (g.kind == "power") g.p = n.number("p");
  if (g.kind == "table") {
    if (n.has("csv"))
      g.csv = n.text("csv");
    else
      g.knots = parse_knots(n, "knots");
  }
  checked(n, [&] { return g.build(); });
  return g;
}

RawGaugeSpec parse_raw_gauge(const Node& n) {
  n.allow({"kind", "p", "cap", "knots"});
  RawGaugeSpec g;
  g.kind = one_of(n, "kind", {"power", "log1p", "cap", "table"});
  if (g.kind == "power") g.p = n.number("p");
  if (g.kind == "cap") g.cap = n.number("cap");
  if (g.kind == "table") g.knots = parse_knots(n, "knots");
  return g;
}

MatrixSpec parse_matrix_cocycle(const Node& n) {
  n.allow({"kind", "matrix", "matrices", "values"});
  MatrixSpec m;
  m.kind = one_of(n, "kind", {"constant", "table", "rotated_diagonal"});
  if (m.kind == "constant") m.matrices.push_back(n.matrix("matrix"));
  if (m.kind == "table") {
    const auto items = n.items("matrices");
    if (items.empty()) n.at("matrices").fail("need at least one matrix");
    for (const Node& item : items) m.matrices.push_back(item.as_matrix());
  }
  if (m.kind == "rotated_diagonal") {
    const auto v = n.numbers("values");
    if (v.size() != 2) n.at("values").fail("expected two diagonal values");
    m.values = Eigen::Vector2d(v[0], v[1]);
  }
  return m;
}

SpaceSpec parse_space(const Node& n) {
  SpaceSpec s;
  s.model = one_of(n, "model", {"euclidean", "gauged_line", "poincare_disk", "free_group_tree", "posdef_cone"});
  if (s.model == "euclidean") {
    n.allow({"model", "dim"});
    s.dim = static_cast<int>(n.count("dim", 1));
  } else if (s.model == "gauged_line") {
    n.allow({"model", "gauge"});
    s.gauge = parse_gauge(n.at("gauge"));
  } else if (s.model == "poincare_disk") {
    n.allow({"model"});
  } else if (s.model == "free_group_tree") {
    n.allow({"model", "rank"});
    s.rank = static_cast<int>(n.count("rank", 2));
  } else {
    n.allow({"model", "dim", "cocycle"});
    s.dim = static_cast<int>(n.count("dim", 2));
    s.cocycle = parse_matrix_cocycle(n.at("cocycle"));
    const bool rotated = s.cocycle.kind == "rotated_diagonal";
    for (const auto& m : s.cocycle.matrices)
      if (m.rows() != s.dim) n.at("cocycle").fail("matrix size differs from dim");
    if (rotated && s.dim != 2) n.at("cocycle").fail("rotated_diagonal needs dim 2");
  }
  return s;
}

GroupSpec parse_group(const Node& n) {
  GroupSpec g;
  g.kind = one_of(n, "kind", {"integer_lattice", "free_group", "heisenberg"});
  if (g.kind == "integer_lattice") {
    n.allow({"kind", "dim"});
    g.dim = static_cast<int>(n.count("dim", 1));
  } else if (g.kind == "free_group") {
    n.allow({"kind", "rank"});
    g.rank = static_cast<int>(n.count("rank", 2));
  } else {
    n.allow({"kind", "radius"});
    g.radius = static_cast<int>(n.count("radius", 14));
  }
  return g;
}

std::optional<Expectation> parse_expect(const Node& n, const std::string& key) {
  if (!n.has(key)) return std::nullopt;
  const Node e = n.at(key);
  e.allow({"value", "tolerance"});
  Expectation x{e.number("value"), e.number("tolerance")};
  if (x.tolerance < 0) e.at("tolerance").fail("must be nonnegative");
  return x;
}

std::vector<std::string> parse_checks(const Node& n, std::initializer_list<const char*> known,
                                      std::vector<std::string> fallback) {
  if (!n.has("checks")) return fallback;
  auto checks = n.texts("checks");
  const auto items = n.items("checks");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    bool ok = false;
    for (const char* k : known) ok = ok || checks[i] == k;
    if (!ok) items[i].fail("unknown check '" + checks[i] + "'");
  }
  return checks;
}

void parse_lab(const Node& n, Experiment& x) {
  if (x.lab == "cocycle") {
    n.allow({"depth", "trials", "estimator", "expect", "subadditivity_pairs", "record_times", "birkhoff"});
    auto& p = x.cocycle;
    p.depth = n.count("depth", p.depth);
    p.trials = n.count("trials", p.trials);
    p.estimator = one_of(n, "estimator", {"terminal", "infimum"}, "terminal");
    p.expect = parse_expect(n, "expect");
    p.subadditivity_pairs = n.count("subadditivity_pairs", 0);
    p.birkhoff = parse_expect(n, "birkhoff");
    if (n.has("record_times")) {
      const Node r = n.at("record_times");
      r.allow({"epsilon", "K"});
      p.record_times = std::make_pair(r.number("epsilon", 0.1), r.count("K", 1));
    }
  } else if (x.lab == "boundary") {
    n.allow({"depth", "trials", "stride", "ray_tolerance", "wrong_direction", "stability", "birkhoff"});
    auto& p = x.boundary;
    p.depth = n.count("depth", p.depth);
    p.trials = n.count("trials", p.trials);
    p.stride = n.count("stride", 0);
    p.ray_tolerance = n.number("ray_tolerance", 0.0);
    p.wrong_direction = n.flag("wrong_direction", true);
    p.stability = n.flag("stability", true);
    p.birkhoff = parse_expect(n, "birkhoff");
  } else if (x.lab == "oseledets") {
    n.allow({"n", "eps", "reorth_stride", "moment_bound", "det_tolerance", "symmetry_tolerance", "expect_mu",
             "expect_tolerance", "oracle", "ray_matrix", "ray_tolerance"});
    auto& p = x.oseledets;
    p.n = n.count("n", p.n);
    p.eps = n.number("eps", p.eps);
    p.reorth_stride = n.count("reorth_stride", 1);
    p.moment_bound = n.number("moment_bound", p.moment_bound);
    p.det_tolerance = n.number("det_tolerance", p.det_tolerance);
    p.symmetry_tolerance = n.number("symmetry_tolerance", p.symmetry_tolerance);
    if (n.has("expect_mu")) p.expect_mu = n.numbers("expect_mu");
    p.expect_tolerance = n.number("expect_tolerance", p.expect_tolerance);
    if (n.has("oracle")) {
      const Node o = n.at("oracle");
      o.allow({"trials", "n", "tolerance"});
      p.oracle = std::make_pair(o.count("trials", 40), o.count("n", 1000));
      p.oracle_tolerance = o.number("tolerance", p.oracle_tolerance);
    }
    p.ray_matrix = n.flag("ray_matrix", false);
    p.ray_tolerance = n.number("ray_tolerance", p.ray_tolerance);
    if (p.eps < 0) n.at("eps").fail("must be nonnegative");
  } else if (x.lab == "walk") {
    n.allow({"steps", "n", "trials", "seed", "checks", "expect", "measure", "stationarity", "fk_samples", "growth_radius",
             "centered_tolerance", "harmonic_samples"});
    auto& p = x.walk;
    if (n.has("steps")) {
      const Node s = n.at("steps");
      if (s.json().is_string()) {
        if (s.json().get<std::string>() != "uniform") s.fail("expected \"uniform\" or a support/weights table");
      } else {
        s.allow({"support", "weights"});
        p.steps.uniform = false;
        p.steps.support = s.texts("support");
        p.steps.weights = s.numbers("weights");
        if (p.steps.support.size() != p.steps.weights.size() || p.steps.support.empty())
          s.fail("support and weights must be nonempty and equally long");
      }
    }
    p.n = n.count("n", p.n);
    p.trials = n.count("trials", p.trials);
    p.seed = n.seed("seed", p.seed);
    p.checks = parse_checks(n, {"drift", "fk", "stationarity", "character", "harmonic", "growth", "centered",
                                "cocycle_relation"},
                            {"drift"});
    p.expect = parse_expect(n, "expect");
    if (n.has("measure")) {
      const Node m = n.at("measure");
      m.allow({"n", "trials", "depth"});
      p.measure_n = m.count("n", p.measure_n);
      p.measure_trials = m.count("trials", p.measure_trials);
      p.measure_depth = m.count("depth", p.measure_depth);
    }
    if (n.has("stationarity")) {
      const Node m = n.at("stationarity");
      m.allow({"n", "trials"});
      p.stationarity_n = m.count("n", 0);
      p.stationarity_trials = m.count("trials", 0);
    }
    p.fk_samples = n.count("fk_samples", p.fk_samples);
    p.growth_radius = n.count("growth_radius", p.growth_radius);
    p.centered_tolerance = n.number("centered_tolerance", p.centered_tolerance);
    p.harmonic_samples = n.count("harmonic_samples", p.harmonic_samples);
  } else {
    n.allow({"D", "raw", "f", "p", "n", "trials", "seed", "checks", "probe_base", "probe_count",
             "guard_threshold"});
    auto& p = x.gauge;
    p.checks = parse_checks(n, {"aaronson", "aaronson_weiss", "regularization", "mz", "log", "trivial_boundary"},
                            {"aaronson"});
    auto needs = [&](const char* c) { return std::find(p.checks.begin(), p.checks.end(), c) != p.checks.end(); };
    if (n.has("D") || needs("aaronson") || needs("trivial_boundary")) p.D = parse_gauge(n.at("D"));
    if (needs("aaronson_weiss") || needs("regularization")) p.raw = parse_raw_gauge(n.at("raw"));
    if (needs("aaronson") || needs("aaronson_weiss") || needs("mz") || needs("log")) p.f = parse_dist(n.at("f"));
    p.p = n.number("p", p.p);
    if (needs("mz") && !(p.p > 0.0 && p.p < 1.0)) n.at("p").fail("must lie in (0, 1)");
    p.n = n.count("n", p.n);
    p.trials = n.count("trials", p.trials);
    p.seed = n.seed("seed", p.seed);
    p.probe_base = n.number("probe_base", p.probe_base);
    p.probe_count = n.count("probe_count", p.probe_count);
    p.guard_threshold = n.number("guard_threshold", p.guard_threshold);
    if (!(p.probe_base > 1.0)) n.at("probe_base").fail("must exceed 1");
  }
}

}  // namespace

GaugeFunction GaugeSpec::build() const {
  if (kind == "power") return GaugeFunction::power(p);
  if (kind == "log1p") return GaugeFunction::log1p();
  if (!csv.empty()) return GaugeFunction::table_from_csv(csv);
  return GaugeFunction::table(knots);
}

RawGauge RawGaugeSpec::build() const {
  if (kind == "power") {
    const double q = p;
    return {"power(" + std::to_string(q) + ")", [q](double t) { return std::pow(t, q); }};
  }
  if (kind == "log1p") return {"log1p", [](double t) { return std::log1p(t); }};
  if (kind == "cap") {
    const double c = cap;
    return {"cap(" + std::to_string(c) + ")", [c](double t) { return std::min(t, c); }};
  }
  const GaugeFunction g = GaugeFunction::table(knots);
  return {g.name(), [g](double t) { return g(t); }};
}

Experiment parse_experiment(const Json& config) {
  const Node root(config, "config");
  root.allow({"name", "tag", "description", "lab", "driving", "space", "group", "seeds", "tags", "cocycle",
              "boundary", "oseledets", "walk", "gauge"});
  Experiment x;
  x.name = root.text("name");
  if (x.name.empty() || x.name.find_first_of("/\\ ") != std::string::npos)
    root.at("name").fail("must be a nonempty file-name-safe string");
  x.tag = root.text("tag", "");
  x.lab = one_of(root, "lab", {"cocycle", "boundary", "oseledets", "walk", "gauge"});
  for (const char* other : {"cocycle", "boundary", "oseledets", "walk", "gauge"})
    if (x.lab != other && root.has(other)) root.at(other).fail("section does not match lab '" + x.lab + "'");

  const bool driven = x.lab == "cocycle" || x.lab == "boundary" || x.lab == "oseledets";
  if (driven) {
    x.driving = parse_driving(root.at("driving"));
    x.space = parse_space(root.at("space"));
  } else {
    if (root.has("driving")) root.at("driving").fail("not used by the " + x.lab + " lab");
    if (root.has("space")) root.at("space").fail("not used by the " + x.lab + " lab");
  }
  if (x.lab == "walk") x.group = parse_group(root.at("group"));
  else if (root.has("group")) root.at("group").fail("only the walk lab takes a group");
  if (x.lab == "oseledets" && x.space->model != "posdef_cone")
    root.at("space").at("model").fail("the oseledets lab needs posdef_cone");
  for (const char* lab : {"cocycle", "boundary"})
    if (x.lab == lab && root.has(lab) && root.at(lab).has("birkhoff") &&
        !(x.space->model == "euclidean" && x.space->dim == 1))
      root.at(lab).at("birkhoff").fail("needs euclidean dim 1");

  if (root.has("seeds")) {
    if (!driven) root.at("seeds").fail("only driven labs take a seed list");
    std::vector<std::uint64_t> seeds;
    std::set<std::uint64_t> seen;
    for (const Node& s : root.items("seeds")) {
      if (!s.json().is_number_unsigned() && !(s.json().is_number_integer() && s.json().get<std::int64_t>() >= 0))
        s.fail("expected a nonnegative integer");
      const auto v = s.json().get<std::uint64_t>();
      if (!seen.insert(v).second) s.fail("seeds must be distinct");
      seeds.push_back(v);
    }
    if (seeds.empty()) root.at("seeds").fail("need at least one seed");
    x.seeds = std::move(seeds);
  }
  if (root.has("tags")) {
    const Node t = root.at("tags");
    if (!t.json().is_object()) t.fail("expected an object of check -> tag");
    for (auto it = t.json().begin(); it != t.json().end(); ++it) {
      if (!it.value().is_string()) t.at(it.key()).fail("expected a string");
      x.tags[it.key()] = it.value().get<std::string>();
    }
  }

  if (root.has(x.lab)) {
    parse_lab(root.at(x.lab), x);
  } else if (x.lab == "gauge") {
    root.at("gauge");
  } else {
    parse_lab(Node(Json::object(), "config." + x.lab), x);
  }
  if (x.seeds) {
    const std::size_t n = x.seeds->size();
    if (x.lab == "cocycle") x.cocycle.trials = n;
    if (x.lab == "boundary") x.boundary.trials = n;
  }
  return x;
}

Json load_config(const std::string& source) {
  if (source.rfind("preset:", 0) == 0) {
    const std::string name = source.substr(7);
    for (const auto& p : preset_catalog())
      if (p.name == name) return Json::parse(p.text);
    throw SchemaError("config: no preset named '" + name + "'");
  }
  std::ifstream in(source);
  if (!in) throw SchemaError("config: cannot open " + source);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("config: " + source + " is not valid JSON: " + e.what());
  }
}

std::uint64_t config_hash(const Json& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ergolab::runner
