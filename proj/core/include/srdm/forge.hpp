#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "srdm/dct_proxy.hpp"
#include "srdm/image.hpp"
#include "srdm/manifest.hpp"
#include "srdm/resample.hpp"

namespace srdm {

/// Keep, from each complete block of block_len frames, the frames at
/// in-block indices [take_lo, take_hi].
struct FrameWindow {
  int block_len = 100;
  int take_lo = 10;
  int take_hi = 29;
};

enum class Regimes { compressed, uncompressed, both };

struct ForgeConfig {
  int scale = 2;
  Kernel down = Kernel::bilinear;
  std::vector<Kernel> upscalers = {Kernel::bilinear, Kernel::bicubic};
  int q_lo = 15;
  int q_hi = 30;
  std::optional<FrameWindow> window;
  Regimes regimes = Regimes::compressed;
  double train_frac = 0.7;
  double val_frac = 0.15;  // test gets the remainder
  uint64_t seed = 0;
  int threads = 1;

  void validate() const;
  std::string to_json() const;  // canonical; digested into the manifest
  std::string digest() const;
};

struct ForgeError {
  std::string clip_id;
  std::string message;
};

struct ForgeReport {
  std::vector<ForgeError> errors;
  int clips_forged = 0;
};

/// Frames at in-block indices take_lo..take_hi of every complete block.
/// Throws std::invalid_argument when the clip is shorter than one block.
VideoClip select_frame_window(const VideoClip& clip, int block_len, int take_lo, int take_hi);

/// Downscale-then-upscale forgery. The output has the input's dimensions
/// (center-cropped first when not divisible by scale), label fake, and
/// provenance "<up kernel> x<scale>".
VideoClip make_fake(const VideoClip& clip, int scale, Kernel down, Kernel up);

/// Per-clip compression quality, uniform over [q_lo, q_hi] from a stream
/// derived from (seed, clip_id). Exposed so the draw distribution is
/// testable without forging pixels.
int clip_q(uint64_t seed, const std::string& clip_id, int q_lo, int q_hi);

/// Split assignment for a sorted list of clip ids, derived from seed.
std::vector<Split> assign_splits(size_t n_clips, double train_frac, double val_frac,
                                 uint64_t seed);

/// Build the forged corpus: for every decodable source clip emit, per
/// configured regime, one real entry and one fake entry per upscaler, all
/// compressed variants sharing the clip's q draw. Deterministic for fixed
/// (source contents, config, seed). Undecodable clips are collected in the
/// report; an empty source directory throws EmptyInputError.
DatasetManifest forge_dataset(const std::filesystem::path& src_dir,
                              const std::filesystem::path& out_dir, const ForgeConfig& config,
                              ForgeReport* report = nullptr);

/// Load a clip from a directory of numbered PNG frames (sorted by name).
VideoClip load_clip_dir(const std::filesystem::path& dir, const std::string& id);

/// Write clip frames as %06d.png under dir (created if needed).
void write_clip_dir(const std::filesystem::path& dir, const VideoClip& clip);

}  // namespace srdm
