#include "srdm/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace srdm {

bool image_is_valid(const ImageTensor& img) {
  if (img.width <= 0 || img.height <= 0) return false;
  if (img.data.size() != static_cast<size_t>(img.width) * img.height * 3) return false;
  for (const float v : img.data) {
    if (!(v >= 0.0f && v <= 1.0f)) return false;
  }
  return true;
}

void clip01(ImageTensor& img) {
  for (float& v : img.data) v = std::clamp(v, 0.0f, 1.0f);
}

double psnr(const ImageTensor& a, const ImageTensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("psnr: shape mismatch");
  double se = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    se += d * d;
  }
  const double mse = se / static_cast<double>(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

bool clip_is_valid(const VideoClip& clip) {
  if (clip.frames.empty()) return false;
  const auto& f0 = clip.frames.front();
  for (const auto& f : clip.frames) {
    if (!f.same_shape(f0)) return false;
  }
  return true;
}

}  // namespace srdm
