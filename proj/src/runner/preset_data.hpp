#pragma once

#include <vector>

namespace ergolab::runner {

// Preset files embedded at build time.
struct PresetSource {
  const char* name;
  const char* text;
};

extern const std::vector<PresetSource> kPresetSources;

}  // namespace ergolab::runner
