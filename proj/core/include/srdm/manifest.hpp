#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "srdm/image.hpp"

namespace srdm {

enum class Split { train, val, test };

const char* split_name(Split s);
Split split_from_string(const std::string& name);

/// One stored clip variant. Real entries carry an empty upscaler; fake
/// entries carry the upscaler name and scale factor. q is present when the
/// variant went through the compression proxy.
struct ManifestEntry {
  std::string clip_id;
  std::string path;  // relative to the manifest's directory, '/'-separated
  Label label = Label::real;
  std::string upscaler;
  int scale_factor = 0;
  std::optional<int> q;
  int frame_count = 0;
  Split split = Split::train;

  bool compressed() const { return q.has_value(); }
};

/// Index over a forged corpus.
struct DatasetManifest {
  int version = 1;
  std::string toolkit_version;
  uint64_t seed = 0;
  std::string config_digest;
  std::vector<ManifestEntry> entries;

  /// Canonical JSON (sorted keys, stable formatting); byte-identical for
  /// identical content.
  std::string to_json() const;
  static DatasetManifest from_json(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static DatasetManifest load(const std::filesystem::path& path);

  /// SHA-256 over the canonical JSON.
  std::string digest() const;

  /// Structural checks: fake entries have provenance, real ones do not,
  /// paths are non-empty, frame counts positive.
  void validate() const;
};

/// Absolute path of one frame of an entry.
std::filesystem::path frame_path(const std::filesystem::path& root, const ManifestEntry& e,
                                 int frame_index);

}  // namespace srdm
