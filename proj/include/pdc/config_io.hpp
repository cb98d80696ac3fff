#pragma once

#include "pdc/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdc {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct LoadedConfig {
    PhaseMatchConfig phase_match;
    BeamGeometry geometry;
    std::uint64_t digest = 0;  // FNV-1a over the raw file bytes
};

// JSON document with top-level objects "phase_match" and "geometry".
// Unknown keys anywhere are errors, not warnings: a typo in a physics
// parameter must not pass silently.
LoadedConfig load_config(const std::string& path);
LoadedConfig parse_config(const std::string& text);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace pdc
