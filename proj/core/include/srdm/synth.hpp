#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "srdm/image.hpp"

namespace srdm {

/// Procedural "camera-like" clip: layered band-pass textures plus moving
/// hard-edged shapes over a drifting canvas. Motion is integer-pixel only,
/// so frames carry no resampling traces of their own; full-band texture
/// keeps the native/upscaled distinction learnable even after the
/// compression proxy.
VideoClip make_synthetic_clip(const std::string& id, int width, int height, int frames,
                              uint64_t seed);

/// Generate n_clips clips as PNG frame directories under out_dir
/// (out_dir/<id>/%06d.png). Returns the number written.
int generate_synthetic_corpus(const std::filesystem::path& out_dir, int n_clips, int width,
                              int height, int frames, uint64_t seed, int threads = 1);

}  // namespace srdm
