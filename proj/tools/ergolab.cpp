#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "ergolab/runner.hpp"

using namespace ergolab::runner;

namespace {

enum Exit { kOk = 0, kFailed = 1, kSchema = 2, kRuntime = 3 };

int list_presets() {
  for (const auto& p : preset_catalog()) std::printf("%-28s %-14s %s\n", p.name.c_str(), p.tag.c_str(), p.summary.c_str());
  return kOk;
}

int validate(const std::string& source) {
  validate_config(load_config(source));
  std::printf("%s: ok\n", source.c_str());
  return kOk;
}

int run_config(const std::string& source, std::string out, const RunOptions& opt) {
  if (const char* env = std::getenv("ERGOLAB_OUT"); env && *env) out = env;
  const Json config = load_config(source);
  const RunReport report = run(config, opt);
  const auto paths = write_outputs(report, out);
  for (const auto& v : report.verdicts)
    std::printf("%-8s %-22s %-14s value=%.6g tol=%.6g %s\n", v.status.c_str(), v.check.c_str(), v.tag.c_str(),
                v.value, v.tolerance, v.note.c_str());
  std::printf("wrote %zu files to %s\n", paths.size(), out.c_str());
  return report.failed() ? kFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for noncommutative ergodic theorems"};
  app.require_subcommand(1);
  std::string config, out = "out";
  RunOptions opt;

  auto* run_cmd = app.add_subcommand("run", "Run one experiment");
  run_cmd->add_option("--config", config, "Config file, or preset:NAME")->required();
  run_cmd->add_option("--out", out, "Output directory (ERGOLAB_OUT overrides)");
  run_cmd->add_option("--seed-offset", opt.seed_offset, "Added to every seed");
  run_cmd->add_option("--jobs", opt.jobs, "Worker threads for double-precision trials")->check(CLI::PositiveNumber);
  auto* list_cmd = app.add_subcommand("list-presets", "List the shipped presets and their tags");
  auto* validate_cmd = app.add_subcommand("validate-config", "Check a config without running it");
  validate_cmd->add_option("--config", config, "Config file, or preset:NAME")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*list_cmd) return list_presets();
    if (*validate_cmd) return validate(config);
    return run_config(config, out, opt);
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return kSchema;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
}
