#include <algorithm>

#include "preset_data.hpp"
#include "spec.hpp"

namespace ergolab::runner {

const std::vector<Preset>& preset_catalog() {
  static const std::vector<Preset> catalog = [] {
    std::vector<Preset> out;
    for (const auto& src : kPresetSources) {
      const Json j = Json::parse(src.text);
      out.push_back({src.name, j.value("tag", ""), j.value("description", ""), src.text});
    }
    std::sort(out.begin(), out.end(), [](const Preset& a, const Preset& b) { return a.name < b.name; });
    return out;
  }();
  return catalog;
}

const std::vector<std::string>& required_tags() {
  static const std::vector<std::string> tags = {
      "Thm 2",  "Thm 3",  "Lemma 4", "Prop 6",        "Eq alpha",     "Thm 8",  "Cor 10",
      "Cor 11", "Thm 12", "Cor 13",  "Birkhoff sign", "Gauge metric", "Thm 14", "Cor 15",
      "Cor L^p", "Cor log", "Eq cocycle", "Thm 19",   "Cor 20",       "Cor 21", "Cor 22"};
  return tags;
}

}  // namespace ergolab::runner
