#include <ctime>
#include <filesystem>
#include <fstream>

#include "spec.hpp"

namespace ergolab::runner {

const char* const kVersion = "0.1.0";

namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return s;
}

Json seeds_used(const Experiment& x, const RunOptions& o) {
  auto off = [&](std::uint64_t s) { return s + static_cast<std::uint64_t>(o.seed_offset); };
  Json out = Json::array();
  if (x.lab == "walk") {
    out.push_back(off(x.walk.seed));
  } else if (x.lab == "gauge") {
    out.push_back(off(x.gauge.seed));
  } else {
    const std::size_t trials = x.lab == "cocycle" ? x.cocycle.trials : x.lab == "boundary" ? x.boundary.trials : 1;
    for (std::size_t t = 0; t < trials; ++t) out.push_back(off(x.seeds ? (*x.seeds)[t] : x.driving->seed + t));
  }
  return out;
}

}  // namespace

bool RunReport::failed() const {
  for (const auto& v : verdicts)
    if (v.status == "fail") return true;
  return false;
}

Json RunReport::to_json() const {
  Json v = Json::array();
  for (const auto& x : verdicts)
    v.push_back({{"check", x.check}, {"tag", x.tag}, {"status", x.status}, {"value", x.value},
                 {"tolerance", x.tolerance}, {"note", x.note}});
  Json files = Json::array();
  for (const auto& f : series) files.push_back(f.name);
  return {{"name", name}, {"lab", lab}, {"tag", tag}, {"status", failed() ? "fail" : "pass"},
          {"verdicts", v}, {"results", results}, {"files", files}, {"provenance", provenance}};
}

RunReport run(const Json& config, const RunOptions& options) {
  const Experiment x = parse_experiment(config);
  validate_experiment(x);
  RunReport r;
  r.name = x.name;
  r.lab = x.lab;
  r.tag = x.tag;
  r.provenance = {{"config_hash", hex(config_hash(config))}, {"seeds", seeds_used(x, options)},
                  {"seed_offset", options.seed_offset}, {"version", kVersion},
                  {"timestamp", options.timestamp.empty() ? utc_now() : options.timestamp}};
  run_lab(x, options, r);
  return r;
}

void validate_config(const Json& config) { validate_experiment(parse_experiment(config)); }

std::vector<std::string> write_outputs(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::string> paths;
  auto write = [&](const std::string& name, const std::string& contents) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    out << contents;
    if (!out) throw Error("cannot write " + path);
    paths.push_back(path);
  };
  write(report.name + ".json", report.to_json().dump(2) + "\n");
  for (const auto& f : report.series) write(f.name, f.contents);
  return paths;
}

}  // namespace ergolab::runner
