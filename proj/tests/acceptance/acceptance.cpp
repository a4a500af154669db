// One line per acceptance criterion.  Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ergolab/model_checks.hpp"
#include "ergolab/runner.hpp"

using namespace ergolab;
using runner::Json;
using runner::RunReport;

namespace {

// Frozen values from oracles outside this code base.
// Top exponent of the iid uniform product of [[2,1],[1,1]] and [[1,1],[1,2]]:
// power iteration in double precision, 5 x 2e8 steps, se 1.1e-6.
constexpr double kShearsMu = 0.9154790;
// Simple random walk drift on the free group of rank k is (k - 1) / k.
constexpr double kFreeGroupDrift = 0.5;
// ||m||_1 for the lattice measure 1/2 at e_1 and 1/6 at each of -e_1, e_2, -e_2 on Z^2.
constexpr double kLatticeMeanNorm = 1.0 / 3.0;
// Balls of radius 0..12 in the Heisenberg group with generators x^+-1, y^+-1 (breadth-first search).
const std::vector<double> kHeisenbergBalls = {1, 5, 17, 53, 135, 299, 593, 1069, 1793, 2845, 4309, 6281, 8871};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " FAILED");
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

RunReport run_preset(const std::string& name, runner::RunOptions options = {}) {
  options.timestamp = "acceptance";
  return runner::run(runner::load_config("preset:" + name), options);
}

const runner::Verdict* verdict(const RunReport& r, const std::string& check) {
  for (const auto& v : r.verdicts)
    if (v.check == check) return &v;
  return nullptr;
}

std::string status(const RunReport& r, const std::string& check) {
  const auto* v = verdict(r, check);
  return v ? v->status : "missing";
}

double mean(const Json& a) {
  double s = 0.0;
  for (const auto& x : a) s += x.get<double>();
  return s / static_cast<double>(a.size());
}

Outcome metric_suite_criterion() {
  Outcome o;
  const double tol = 1e-9;
  auto axioms = [&](const std::string& name, const AxiomReport& r, double t) {
    o.require(r.cases == 1000 && r.pass(t), name + " " + fmt(r.worst()));
  };
  axioms("euclidean", metric_suite(Euclidean<double>(3), 1000, 1), tol);
  axioms("gauged_power", metric_suite(GaugedLine(GaugeFunction::power(0.5)), 1000, 2), tol);
  axioms("gauged_log", metric_suite(GaugedLine(GaugeFunction::log1p()), 1000, 3), tol);
  axioms("disk", metric_suite(PoincareDisk<double>(), 1000, 4), tol);
  axioms("tree", metric_suite(FreeGroupTree(2), 1000, 5), 0.0);
  axioms("posdef", metric_suite(PosdefCone<double>(3), 1000, 6), tol);

  auto chart = [&](const std::string& name, const ChartLimitReport& r, double t) {
    o.require(r.pass(t), name + " chart " + fmt(r.worst));
  };
  chart("euclidean", chart_limit_suite(Euclidean<double>(3), 1000, 11), 1e-6);
  chart("tree", chart_limit_suite(FreeGroupTree(2), 1000, 12), 0.0);
  auto dp = [](const Complex<double>& z) { return Complex<BigReal>(z.re, z.im); };
  auto db = [](const PoincareDisk<double>::Boundary& b) {
    return PoincareDisk<BigReal>::Boundary{Complex<BigReal>(b.xi.re, b.xi.im)};
  };
  chart("disk", chart_limit_suite(PoincareDisk<BigReal>(), PoincareDisk<double>(), 100, 13, dp, db), 1e-6);
  auto cp = [](const Eigen::MatrixXd& p) { return cast_matrix<BigReal, double>(p); };
  auto cb = [](const PosdefCone<double>::Boundary& b) {
    return PosdefCone<BigReal>::Boundary{cast_matrix<BigReal, double>(b.H)};
  };
  chart("posdef", chart_limit_suite(PosdefCone<BigReal>(2), PosdefCone<double>(2), 25, 14, cp, cb), 1e-6);
  return o;
}

Outcome drift_criterion() {
  Outcome o;
  const Json config = runner::load_config("preset:constant_translation");
  const double alpha = config["cocycle"]["expect"]["value"].get<double>();
  const auto ct = run_preset("constant_translation");
  o.require(ct.results["drift"]["alpha_infimum"].get<double>() == alpha,
            "constant alpha " + fmt(ct.results["drift"]["alpha_infimum"].get<double>()) + " == " + fmt(alpha));

  const auto cl = run_preset("centered_line");
  const auto& d = cl.results["drift"];
  o.require(d["depth"] == 10000 && d["trials"] == 100 && d["alpha_infimum"].get<double>() <= 0.02,
            "centered alpha " + fmt(d["alpha_infimum"].get<double>()));

  const auto fg = run_preset("free_group_drift");
  const auto& w = fg.results["drift"];
  o.require(w["n"] == 100000 && std::abs(w["terminal"].get<double>() - kFreeGroupDrift) <= 0.01,
            "free group drift " + fmt(w["terminal"].get<double>()));
  return o;
}

const std::vector<std::string> kBoundaryPresets = {"tree_boundary", "euclidean_ray", "cone_boundary", "disk_ray",
                                                   "birkhoff_sign", "gauged_line_boundary"};

Outcome boundary_criterion(std::vector<RunReport>& reports) {
  Outcome o;
  for (const auto& name : kBoundaryPresets) {
    reports.push_back(run_preset(name));
    const auto& r = reports.back();
    if (status(r, "main_theorem") == "flagged") {
      o.require(true, name + " sublinear, skipped");
      continue;
    }
    const double se = r.results["b_N_se"].get<double>();
    const double tol = std::max(0.05, 5.0 * se);
    double worst = 0.0;
    for (const auto& x : r.results["main_theorem"]["residual"]) worst = std::max(worst, x.get<double>());
    o.require(worst <= tol, name + " " + fmt(worst));
    if (r.results.contains("wrong_direction")) {
      bool up = true;
      for (const auto& x : r.results["wrong_direction"]["residual_increase"]) up = up && x.get<double>() > 0.0;
      o.require(up, name + " wrong direction");
    }
  }
  return o;
}

Outcome ray_criterion(const std::vector<RunReport>& reports) {
  Outcome o;
  auto find = [&](const std::string& name) -> const RunReport& {
    for (const auto& r : reports)
      if (r.name == name) return r;
    throw Error("no report for " + name);
  };
  auto check = [&](const std::string& name, double tol) {
    const auto& r = find(name);
    const auto& e = r.results["ray_error"];
    const double m = mean(e["e_N"]);
    o.require(r.results["depth"] == 10000 && m < tol && e["slope"].get<double>() < 0.0,
              name + " e_N " + fmt(m) + " slope " + fmt(e["slope"].get<double>()));
  };
  check("euclidean_ray", 0.05);
  check("cone_boundary", 0.05);
  check("disk_ray", 0.1);
  return o;
}

Outcome oseledets_criterion() {
  Outcome o;
  const auto dg = run_preset("oseledets_diagonal");
  const auto& mu = dg.results["spectrum"]["mu"];
  const double gap = std::max(std::abs(mu[0].get<double>() - std::log(2.0)), std::abs(mu[1].get<double>() + std::log(2.0)));
  o.require(gap <= 1e-9, "diagonal " + fmt(gap));

  const auto sh = run_preset("oseledets_shears");
  const auto& s = sh.results["spectrum"];
  const double oracle_gap =
      std::max(std::abs(s["mu"][0].get<double>() - kShearsMu), std::abs(s["mu"][1].get<double>() + kShearsMu));
  o.require(s["n"] == 10000 && oracle_gap <= 0.02, "shears vs oracle " + fmt(oracle_gap));
  o.require(status(sh, "oracle") == "pass", "shears vs product ensemble " + fmt(verdict(sh, "oracle")->value));

  const auto rt = run_preset("oseledets_rotated");
  for (const auto* r : {&dg, &sh, &rt}) {
    const auto* det = verdict(*r, "determinant");
    const auto* inv = verdict(*r, "inversion_symmetry");
    o.require(det && det->value < 0.01, r->name + " det " + fmt(det ? det->value : NAN));
    o.require(inv && inv->value <= 0.02, r->name + " inversion " + fmt(inv ? inv->value : NAN));
    o.require(r->results["omet"]["eps"].get<double>() == 0.1 && status(*r, "omet") == "pass", r->name + " omet");
  }
  return o;
}

Outcome fk_criterion() {
  Outcome o;
  const auto fg = run_preset("fk_free_group");
  const auto& fk = fg.results["fk"];
  const double diff = std::abs(fk["difference"].get<double>()), sigma = fk["sigma"].get<double>();
  o.require(fk["samples"] == 10000 && diff <= 3.0 * sigma, "free group " + fmt(diff) + " <= 3 * " + fmt(sigma));
  const auto& st = fg.results["stationarity"];
  o.require(st["residual_2n"].get<double>() < st["residual_n"].get<double>(),
            "stationarity " + fmt(st["residual_n"].get<double>()) + " -> " + fmt(st["residual_2n"].get<double>()));
  const auto lt = run_preset("fk_delta_lattice");
  const auto& lf = lt.results["fk"];
  o.require(lf["difference"].get<double>() == 0.0 && lf["lhs"] == lf["rhs"], "delta lattice " + fmt(lf["lhs"].get<double>()));
  return o;
}

Outcome character_criterion() {
  Outcome o;
  const auto hz = run_preset("heisenberg_centered");
  o.require(hz.results["character"]["integral"].get<double>() == 0.0, "symmetric integral");
  const auto& d = hz.results["drift"];
  o.require(d["n"] == 10000 && d["terminal"].get<double>() <= 0.05, "heisenberg drift " + fmt(d["terminal"].get<double>()));
  const auto& rates = hz.results["growth"]["rates"];
  bool balls = rates.size() + 1 <= kHeisenbergBalls.size();
  for (std::size_t r = 0; balls && r < rates.size(); ++r)
    balls = std::abs(rates[r].get<double>() - std::log(kHeisenbergBalls[r + 1]) / static_cast<double>(r + 1)) < 1e-12;
  o.require(balls, "heisenberg balls");

  const auto lc = run_preset("character_lattice");
  const double integral = lc.results["character"]["integral"].get<double>();
  const double ell = lc.results["drift"]["terminal"].get<double>(), se = lc.results["drift"]["terminal_se"].get<double>();
  o.require(std::abs(integral - kLatticeMeanNorm) < 1e-12, "integral " + fmt(integral));
  o.require(std::abs(ell - kLatticeMeanNorm) <= 3.0 * se, "lattice drift " + fmt(ell) + " +- " + fmt(3.0 * se));
  return o;
}

Outcome gauge_criterion() {
  Outcome o;
  const auto aw = run_preset("aaronson_weiss_log");
  const auto& reg = aw.results["regularization"];
  o.require(reg["worst_lower"].get<double>() >= 0.0 && reg["worst_upper"].get<double>() <= 0.0, "d <= D <= 2d");
  o.require(status(run_preset("aaronson_pareto"), "aaronson") == "pass", "tail 0.7 passes");
  const auto ht = run_preset("aaronson_heavy_tail");
  o.require(status(ht, "aaronson") == "flagged" && ht.results["aaronson"]["guard_tripped"] == true, "tail 0.4 trips the guard");
  const auto mz = run_preset("mz_half");
  const double t = mz.results["mz"]["terminal"].get<double>();
  o.require(mz.results["mz"]["n"] == 1000000 && t < 0.02, "mz " + fmt(t));
  const auto lg = run_preset("log_pareto");
  const double l = lg.results["log"]["terminal"].get<double>();
  o.require(lg.results["log"]["n"] == 10000 && std::abs(l - 1.0) < 0.01, "log " + fmt(l));
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timestamp(std::string s) {
  const auto at = s.find("\"timestamp\"");
  if (at == std::string::npos) return s;
  return s.erase(at, s.find('\n', at) - at);
}

Outcome reproducibility_criterion() {
  namespace fs = std::filesystem;
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "ergolab_acceptance";
  fs::remove_all(base);
  for (const std::string name : {"euclidean_ray", "fk_free_group", "oseledets_diagonal", "mz_half"}) {
    runner::RunOptions a, b;
    a.timestamp = "2000-01-01T00:00:00Z";
    b.jobs = 3;
    const auto pa = runner::write_outputs(runner::run(runner::load_config("preset:" + name), a), (base / "a").string());
    const auto pb = runner::write_outputs(runner::run(runner::load_config("preset:" + name), b), (base / "b").string());
    bool same = pa.size() == pb.size();
    for (std::size_t i = 0; same && i < pa.size(); ++i)
      same = fs::path(pa[i]).filename() == fs::path(pb[i]).filename() &&
             strip_timestamp(slurp(pa[i])) == strip_timestamp(slurp(pb[i]));
    o.require(same, name + " bytes");
  }
  fs::remove_all(base);
  std::set<std::string> tags;
  for (const auto& p : runner::preset_catalog()) tags.insert(p.tag);
  std::string missing;
  for (const auto& t : runner::required_tags())
    if (!tags.count(t)) missing += " " + t;
  o.require(missing.empty(), "catalog covers " + std::to_string(runner::required_tags().size()) + " tags" + missing);
  return o;
}

}  // namespace

int main() {
  std::vector<RunReport> boundary;
  const std::vector<std::tuple<int, double, std::function<Outcome()>>> criteria = {
      {1, 60, metric_suite_criterion},
      {2, 120, drift_criterion},
      {3, 120, [&] { return boundary_criterion(boundary); }},
      {4, 120, [&] { return ray_criterion(boundary); }},
      {5, 180, oseledets_criterion},
      {6, 180, fk_criterion},
      {7, 120, character_criterion},
      {8, 180, gauge_criterion},
      {9, 600, reproducibility_criterion},
  };
  int failures = 0;
  for (const auto& [k, budget, body] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < budget, fmt(secs) + " s < " + fmt(budget) + " s");
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", k, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures;
}
