#pragma once

#include <cstdint>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "srdm/image.hpp"
#include "srdm/manifest.hpp"
#include "srdm/rng.hpp"

namespace srdm {

/// LRU cache of decoded frames (stored 8-bit, converted on access).
class FrameCache {
 public:
  explicit FrameCache(size_t byte_cap = size_t{1} << 30) : byte_cap_(byte_cap) {}

  ImageTensor get(const std::filesystem::path& path);
  size_t bytes() const { return bytes_; }

 private:
  struct Slot {
    std::vector<uint8_t> rgb;
    int w = 0, h = 0;
  };
  size_t byte_cap_;
  size_t bytes_ = 0;
  std::mutex mu_;
  std::list<std::string> order_;  // front = most recent
  std::map<std::string, std::pair<std::list<std::string>::iterator, Slot>> slots_;
};

/// Metadata-level triplet draw (no pixels touched).
struct TripletSpec {
  const ManifestEntry* anchor = nullptr;
  const ManifestEntry* positive = nullptr;
  const ManifestEntry* negative = nullptr;
  int anchor_start = 0;
  int positive_start = 0;
};

struct TripletSample {
  FramePair anchor;
  FramePair positive;
  FramePair negative;
};

/// Draws anchor/positive/negative triplets from one split of a manifest.
///
/// The anchor is a real entry; the positive a real entry from a different
/// clip in the same compression regime; the negative a fake forged from the
/// anchor's clip in the same regime, sharing the anchor's start index. When
/// several upscalers exist the negative's upscaler is chosen uniformly.
class TripletSampler {
 public:
  TripletSampler(const DatasetManifest& manifest, std::filesystem::path root, Split split,
                 int k_frames, Rng rng, std::shared_ptr<FrameCache> cache);

  TripletSpec sample_spec();
  /// Draw positive/negative/starts for a caller-chosen anchor entry.
  TripletSpec sample_spec_for(const ManifestEntry& anchor);
  TripletSample sample();
  TripletSample materialize(const TripletSpec& spec);

  /// Load one frame pair of an entry (no augmentation).
  FramePair load_pair(const ManifestEntry& entry, int start) const;

  int k_frames() const { return k_; }
  /// Real anchor candidates in the split (used for epoch accounting).
  const std::vector<const ManifestEntry*>& anchors() const { return anchor_entries_; }
  /// Draw a start index for the given anchor entry.
  int draw_start(const ManifestEntry& entry);

 private:
  const DatasetManifest& manifest_;
  std::filesystem::path root_;
  int k_;
  Rng rng_;
  std::shared_ptr<FrameCache> cache_;

  // regime: 0 = uncompressed, 1 = compressed
  std::vector<const ManifestEntry*> reals_[2];
  std::map<std::string, std::vector<const ManifestEntry*>> fakes_[2];
  std::vector<const ManifestEntry*> anchor_entries_;
};

}  // namespace srdm
