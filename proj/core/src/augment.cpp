#include "srdm/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "srdm/dct_proxy.hpp"

namespace srdm {

AblationTransform ablation_from_string(const std::string& name) {
  if (name == "blur") return AblationTransform::blur;
  if (name == "noise" || name == "gauss_noise") return AblationTransform::gauss_noise;
  if (name == "jpeg" || name == "jpeg_proxy") return AblationTransform::jpeg_proxy;
  throw std::invalid_argument("unknown ablation transform: " + name);
}

const char* ablation_name(AblationTransform t) {
  switch (t) {
    case AblationTransform::blur: return "blur";
    case AblationTransform::gauss_noise: return "noise";
    case AblationTransform::jpeg_proxy: return "jpeg";
  }
  return "?";
}

void AugConfig::validate(int frame_w, int frame_h) const {
  if (crop < 1 || crop > std::min(frame_w, frame_h)) {
    throw std::invalid_argument("aug: crop size exceeds frame dimensions");
  }
  if (cutout_count < 0) throw std::invalid_argument("aug: cutout_count must be >= 0");
  if (cutout_count > 0) {
    if (cutout_min < 1 || cutout_max < cutout_min) {
      throw std::invalid_argument("aug: bad cutout size range");
    }
    if (cutout_max >= crop) throw std::invalid_argument("aug: cutout size must be < crop");
  }
}

static FramePair like(const FramePair& src) {
  FramePair out;
  out.clip_id = src.clip_id;
  out.start_index = src.start_index;
  out.label = src.label;
  return out;
}

FramePair random_crop(const FramePair& pair, int size, Rng& rng) {
  if (pair.frames.empty()) throw std::invalid_argument("random_crop: empty pair");
  const int w = pair.width(), h = pair.height();
  if (size < 1 || size > w || size > h) {
    throw std::invalid_argument("random_crop: size exceeds frame dimensions");
  }
  // One offset draw, shared by all k frames.
  const int x0 = static_cast<int>(rng.uniform_int(0, w - size));
  const int y0 = static_cast<int>(rng.uniform_int(0, h - size));

  FramePair out = like(pair);
  out.frames.reserve(pair.frames.size());
  for (const auto& f : pair.frames) {
    ImageTensor c(size, size);
    for (int y = 0; y < size; ++y) {
      const float* src = &f.data[(static_cast<size_t>(y0 + y) * w + x0) * 3];
      std::copy(src, src + static_cast<size_t>(size) * 3,
                &c.data[static_cast<size_t>(y) * size * 3]);
    }
    out.frames.push_back(std::move(c));
  }
  return out;
}

FramePair center_crop(const FramePair& pair, int size) {
  if (pair.frames.empty()) throw std::invalid_argument("center_crop: empty pair");
  const int w = pair.width(), h = pair.height();
  if (size < 1 || size > w || size > h) {
    throw std::invalid_argument("center_crop: size exceeds frame dimensions");
  }
  const int x0 = (w - size) / 2;
  const int y0 = (h - size) / 2;
  FramePair out = like(pair);
  for (const auto& f : pair.frames) {
    ImageTensor c(size, size);
    for (int y = 0; y < size; ++y) {
      const float* src = &f.data[(static_cast<size_t>(y0 + y) * w + x0) * 3];
      std::copy(src, src + static_cast<size_t>(size) * 3,
                &c.data[static_cast<size_t>(y) * size * 3]);
    }
    out.frames.push_back(std::move(c));
  }
  return out;
}

FramePair cutout(const FramePair& pair, const AugConfig& cfg, Rng& rng) {
  if (pair.frames.empty()) throw std::invalid_argument("cutout: empty pair");
  FramePair out = pair;
  const int w = pair.width(), h = pair.height();
  for (int r = 0; r < cfg.cutout_count; ++r) {
    const int rw = static_cast<int>(rng.uniform_int(cfg.cutout_min, cfg.cutout_max));
    const int rh = static_cast<int>(rng.uniform_int(cfg.cutout_min, cfg.cutout_max));
    // Center anywhere in the frame; the rectangle clips at borders.
    const int cx = static_cast<int>(rng.uniform_int(0, w - 1));
    const int cy = static_cast<int>(rng.uniform_int(0, h - 1));
    const int x0 = std::max(0, cx - rw / 2), x1 = std::min(w, cx - rw / 2 + rw);
    const int y0 = std::max(0, cy - rh / 2), y1 = std::min(h, cy - rh / 2 + rh);
    for (auto& f : out.frames) {
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          f.at(y, x, 0) = 0.5f;
          f.at(y, x, 1) = 0.5f;
          f.at(y, x, 2) = 0.5f;
        }
      }
    }
  }
  return out;
}

ImageTensor gaussian_blur(const ImageTensor& img, double sigma) {
  if (sigma <= 0.0) return img;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[static_cast<size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[static_cast<size_t>(i + radius)];
  }
  for (double& v : k) v /= sum;

  const int w = img.width, h = img.height;
  std::vector<double> mid(img.data.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0, 0, 0};
      for (int d = -radius; d <= radius; ++d) {
        const int sx = std::clamp(x + d, 0, w - 1);
        const double kv = k[static_cast<size_t>(d + radius)];
        for (int c = 0; c < 3; ++c) {
          acc[c] += kv * img.at(y, sx, c);
        }
      }
      for (int c = 0; c < 3; ++c) mid[(static_cast<size_t>(y) * w + x) * 3 + c] = acc[c];
    }
  }
  ImageTensor out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0, 0, 0};
      for (int d = -radius; d <= radius; ++d) {
        const int sy = std::clamp(y + d, 0, h - 1);
        const double kv = k[static_cast<size_t>(d + radius)];
        for (int c = 0; c < 3; ++c) {
          acc[c] += kv * mid[(static_cast<size_t>(sy) * w + x) * 3 + c];
        }
      }
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = static_cast<float>(std::clamp(acc[c], 0.0, 1.0));
      }
    }
  }
  return out;
}

FramePair ablation_transform(const FramePair& pair, AblationTransform which, const AugConfig& cfg,
                             Rng& rng) {
  if (pair.frames.empty()) throw std::invalid_argument("ablation_transform: empty pair");
  FramePair out = like(pair);
  switch (which) {
    case AblationTransform::blur: {
      const double sigma = rng.uniform(cfg.blur_sigma_lo, cfg.blur_sigma_hi);
      for (const auto& f : pair.frames) out.frames.push_back(gaussian_blur(f, sigma));
      return out;
    }
    case AblationTransform::gauss_noise: {
      const double sigma = rng.uniform(cfg.noise_sigma_lo, cfg.noise_sigma_hi);
      for (const auto& f : pair.frames) {
        ImageTensor n = f;
        for (float& v : n.data) {
          v = std::clamp(v + static_cast<float>(sigma * rng.normal()), 0.0f, 1.0f);
        }
        out.frames.push_back(std::move(n));
      }
      return out;
    }
    case AblationTransform::jpeg_proxy: {
      const int q = static_cast<int>(rng.uniform_int(cfg.jpeg_q_lo, cfg.jpeg_q_hi));
      for (const auto& f : pair.frames) {
        out.frames.push_back(compress_frame(f, CompressionParams{q}));
      }
      return out;
    }
  }
  throw std::invalid_argument("ablation_transform: unknown transform id");
}

FramePair augment(const FramePair& pair, const AugConfig& cfg, Rng& rng) {
  FramePair out = random_crop(pair, cfg.crop, rng);
  if (cfg.cutout_count > 0) out = cutout(out, cfg, rng);
  if (cfg.ablation) out = ablation_transform(out, *cfg.ablation, cfg, rng);
  return out;
}

}  // namespace srdm
