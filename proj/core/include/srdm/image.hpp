#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace srdm {

enum class Label { real, fake };

inline const char* label_name(Label l) { return l == Label::real ? "real" : "fake"; }

/// Decoded RGB frame. Values are real in [0,1], interleaved row-major:
/// data[(y*width + x)*3 + c].
struct ImageTensor {
  int width = 0;
  int height = 0;
  static constexpr int channels = 3;
  std::vector<float> data;

  ImageTensor() = default;
  ImageTensor(int w, int h, float fill = 0.0f)
      : width(w), height(h), data(static_cast<size_t>(w) * h * 3, fill) {}

  float& at(int y, int x, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  float at(int y, int x, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }

  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  bool same_shape(const ImageTensor& o) const { return width == o.width && height == o.height; }
};

/// True when dimensions are positive, the buffer has width*height*3 entries
/// and every value lies in [0,1].
bool image_is_valid(const ImageTensor& img);

/// Clamp all values into [0,1] in place.
void clip01(ImageTensor& img);

/// Peak signal-to-noise ratio in dB between two same-shape images
/// (peak = 1.0). Identical images give +infinity.
double psnr(const ImageTensor& a, const ImageTensor& b);

struct Provenance {
  std::string upscaler;  // kernel or external tool name
  int scale_factor = 0;
};

/// Ordered frame sequence with forging metadata.
struct VideoClip {
  std::string id;
  std::vector<ImageTensor> frames;
  Label source_label = Label::real;
  std::optional<Provenance> provenance;       // set for fakes
  std::optional<int> compression_quality;     // set once compressed

  int frame_count() const { return static_cast<int>(frames.size()); }
};

/// True when the clip is non-empty and all frames share dimensions.
bool clip_is_valid(const VideoClip& clip);

/// k temporally consecutive frames from one clip; the unit of model input.
struct FramePair {
  std::vector<ImageTensor> frames;  // k = 1, 2 or 3
  std::string clip_id;
  int start_index = 0;
  Label label = Label::real;

  int k() const { return static_cast<int>(frames.size()); }
  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
};

}  // namespace srdm
