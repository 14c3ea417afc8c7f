#pragma once

#include <filesystem>
#include <string>

#include "srdm/model.hpp"

namespace srdm {

/// Binary checkpoint, version 1. Layout (all integers little-endian):
///   magic "SRDM" | u32 version | u32 digest_len | digest bytes |
///   u64 init_seed | u32 crop | u32 n_arrays |
///   per array: u32 name_len | name | u32 ndim | u32 dims[] | f32 data[]
inline constexpr char kCheckpointMagic[4] = {'S', 'R', 'D', 'M'};
inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const Model<float>& model, const std::string& config_digest, int crop,
                     const std::filesystem::path& path);

struct LoadedCheckpoint {
  Model<float> model;
  std::string config_digest;
  int crop = 0;
};

/// Rebuilds the model from the named arrays (the architecture is inferred
/// from their shapes). Throws CheckpointError on corrupt files or version
/// mismatches.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace srdm
