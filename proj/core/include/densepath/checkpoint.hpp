#pragma once

#include <map>
#include <optional>
#include <string>

#include "densepath/params.hpp"

namespace densepath {

// Checkpoint container: string metadata, named parameters (shape + float64
// payload) and optional Adam state. Fixed little-endian layout, versioned.
struct LoadedCheckpoint {
  std::uint32_t version = 0;
  std::map<std::string, std::string> metadata;
  ParamStore params;
  std::optional<AdamState> adam;
};

void save_checkpoint(const std::string& path, const ParamStore& params, const AdamState* adam,
                     const std::map<std::string, std::string>& metadata);

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace densepath
