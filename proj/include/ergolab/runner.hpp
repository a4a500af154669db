#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "ergolab/error.hpp"

namespace ergolab::runner {

using Json = nlohmann::json;

// Invalid config; the message starts with the offending field path.
class SchemaError : public Error {
 public:
  using Error::Error;
};

struct Verdict {
  std::string check;
  std::string tag;
  std::string status;  // "pass", "fail" or "flagged"
  double value = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct OutputFile {
  std::string name;
  std::string contents;
};

struct RunOptions {
  std::int64_t seed_offset = 0;
  std::size_t jobs = 1;
  std::string timestamp;  // empty: current UTC time
};

struct RunReport {
  std::string name;
  std::string lab;
  std::string tag;
  std::vector<Verdict> verdicts;
  Json results = Json::object();
  Json provenance = Json::object();
  std::vector<OutputFile> series;  // CSV and two-column .dat files

  bool failed() const;
  Json to_json() const;
};

struct Preset {
  std::string name;
  std::string tag;
  std::string summary;
  std::string text;  // config JSON
};

extern const char* const kVersion;

// Shipped presets, sorted by name.
const std::vector<Preset>& preset_catalog();
// Tags the catalog must cover.
const std::vector<std::string>& required_tags();

// A file path, or "preset:NAME" for a catalog entry.
Json load_config(const std::string& source);
// Throws SchemaError naming the first invalid field.
void validate_config(const Json& config);
RunReport run(const Json& config, const RunOptions& options);

std::uint64_t config_hash(const Json& config);
// Writes NAME.json and the series files; returns the paths written.
std::vector<std::string> write_outputs(const RunReport& report, const std::string& dir);

}  // namespace ergolab::runner
