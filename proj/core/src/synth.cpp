#include "srdm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "srdm/png_io.hpp"
#include "srdm/rng.hpp"
#include "srdm/threading.hpp"

namespace fs = std::filesystem;

namespace srdm {

namespace {

// Separable box blur with edge clamping, radius r.
void box_blur(std::vector<float>& v, int w, int h, int r, std::vector<float>& tmp) {
  tmp.resize(v.size());
  const float inv = 1.0f / (2 * r + 1);
  for (int y = 0; y < h; ++y) {
    const float* row = &v[static_cast<size_t>(y) * w];
    float* out = &tmp[static_cast<size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      float s = 0.0f;
      for (int d = -r; d <= r; ++d) s += row[std::clamp(x + d, 0, w - 1)];
      out[x] = s * inv;
    }
  }
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      float s = 0.0f;
      for (int d = -r; d <= r; ++d) {
        s += tmp[static_cast<size_t>(std::clamp(y + d, 0, h - 1)) * w + x];
      }
      v[static_cast<size_t>(y) * w + x] = s * inv;
    }
  }
}

struct Shape {
  bool disc = false;
  int x = 0, y = 0, vx = 1, vy = 1;
  int size = 8;
  float color[3] = {0.5f, 0.5f, 0.5f};
};

}  // namespace

VideoClip make_synthetic_clip(const std::string& id, int width, int height, int frames,
                              uint64_t seed) {
  if (width < 16 || height < 16 || frames < 1) {
    throw std::invalid_argument("make_synthetic_clip: degenerate dimensions");
  }
  Rng rng(Rng::derive_seed(seed, std::string("synth/") + id));

  const int margin = 24;
  const int cw = width + 2 * margin;
  const int ch = height + 2 * margin;
  const size_t cn = static_cast<size_t>(cw) * ch;

  // Smooth base: corner gradient plus two low-frequency waves.
  float corner[4];
  for (float& c : corner) c = static_cast<float>(rng.uniform(0.25, 0.75));
  const double fx1 = rng.uniform(0.5, 2.5), fy1 = rng.uniform(0.5, 2.5);
  const double ph1 = rng.uniform(0.0, 2.0 * M_PI), ph2 = rng.uniform(0.0, 2.0 * M_PI);
  std::vector<float> base(cn);
  for (int y = 0; y < ch; ++y) {
    const float ty = static_cast<float>(y) / (ch - 1);
    for (int x = 0; x < cw; ++x) {
      const float tx = static_cast<float>(x) / (cw - 1);
      const float g = (1 - tx) * (1 - ty) * corner[0] + tx * (1 - ty) * corner[1] +
                      (1 - tx) * ty * corner[2] + tx * ty * corner[3];
      const double w1 = 0.06 * std::sin(2.0 * M_PI * fx1 * tx + ph1);
      const double w2 = 0.06 * std::sin(2.0 * M_PI * fy1 * ty + ph2);
      base[static_cast<size_t>(y) * cw + x] = g + static_cast<float>(w1 + w2);
    }
  }

  // Band-pass texture stack from one white-noise field.
  std::vector<float> noise(cn);
  for (float& v : noise) v = static_cast<float>(rng.uniform(-0.5, 0.5));
  std::vector<float> b1 = noise, b3 = noise, tmp;
  box_blur(b1, cw, ch, 1, tmp);
  box_blur(b3, cw, ch, 3, tmp);
  const float g_hf = static_cast<float>(rng.uniform(0.20, 0.40));
  const float g_mf = static_cast<float>(rng.uniform(0.20, 0.40));
  const float g_lf = static_cast<float>(rng.uniform(0.05, 0.15));
  std::vector<float> tex(cn);
  for (size_t i = 0; i < cn; ++i) {
    tex[i] = g_hf * (noise[i] - b1[i]) + g_mf * (b1[i] - b3[i]) + g_lf * b3[i];
  }

  // High-contrast bars: step edges that survive heavy quantization and get
  // smeared by a downscale/upscale round trip.
  const int n_bars = static_cast<int>(rng.uniform_int(30, 60));
  for (int b = 0; b < n_bars; ++b) {
    const bool horiz = rng.uniform_int(0, 1) == 1;
    const int len = static_cast<int>(rng.uniform_int(8, 30));
    const int thick = static_cast<int>(rng.uniform_int(1, 2));
    const int x0 = static_cast<int>(rng.uniform_int(0, cw - 1));
    const int y0 = static_cast<int>(rng.uniform_int(0, ch - 1));
    const float amp = static_cast<float>(rng.uniform(0.3, 0.6)) *
                      (rng.uniform_int(0, 1) == 0 ? -1.0f : 1.0f);
    for (int t = 0; t < thick; ++t) {
      for (int l = 0; l < len; ++l) {
        const int x = horiz ? x0 + l : x0 + t;
        const int y = horiz ? y0 + t : y0 + l;
        if (x >= 0 && x < cw && y >= 0 && y < ch) {
          tex[static_cast<size_t>(y) * cw + x] += amp;
        }
      }
    }
  }

  // Per-channel gain jitter makes the texture mostly-luma.
  float ch_gain[3];
  for (float& g : ch_gain) g = static_cast<float>(rng.uniform(0.9, 1.1));

  // Moving hard-edged shapes, drawn per frame in frame coordinates.
  const int n_shapes = static_cast<int>(rng.uniform_int(2, 4));
  std::vector<Shape> shapes(static_cast<size_t>(n_shapes));
  for (auto& s : shapes) {
    s.disc = rng.uniform_int(0, 1) == 1;
    s.size = static_cast<int>(rng.uniform_int(6, 20));
    s.x = static_cast<int>(rng.uniform_int(s.size, width - s.size - 1));
    s.y = static_cast<int>(rng.uniform_int(s.size, height - s.size - 1));
    do {
      s.vx = static_cast<int>(rng.uniform_int(-3, 3));
      s.vy = static_cast<int>(rng.uniform_int(-3, 3));
    } while (s.vx == 0 && s.vy == 0);
    for (float& c : s.color) c = static_cast<float>(rng.uniform(0.1, 0.9));
  }

  const double flicker_phase = rng.uniform(0.0, 2.0 * M_PI);
  int ox = margin, oy = margin;

  VideoClip clip;
  clip.id = id;
  clip.frames.reserve(static_cast<size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    if (t > 0) {
      ox = std::clamp(ox + static_cast<int>(rng.uniform_int(-2, 2)), 0, 2 * margin);
      oy = std::clamp(oy + static_cast<int>(rng.uniform_int(-2, 2)), 0, 2 * margin);
    }
    const float gain =
        1.0f + 0.015f * static_cast<float>(std::sin(2.0 * M_PI * t / frames + flicker_phase));

    ImageTensor frame(width, height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const size_t ci = static_cast<size_t>(oy + y) * cw + (ox + x);
        for (int c = 0; c < 3; ++c) {
          frame.at(y, x, c) = gain * (base[ci] + ch_gain[c] * tex[ci]);
        }
      }
    }
    for (auto& s : shapes) {
      const int sx = s.x + s.vx * t;
      const int sy = s.y + s.vy * t;
      // Reflect off frame borders.
      auto bounce = [](int v, int lo, int hi) {
        const int span = 2 * (hi - lo);
        int m = (v - lo) % span;
        if (m < 0) m += span;
        return lo + (m < hi - lo ? m : span - m - 1);
      };
      const int cx = bounce(sx, s.size, width - s.size);
      const int cy = bounce(sy, s.size, height - s.size);
      for (int dy = -s.size; dy <= s.size; ++dy) {
        for (int dx = -s.size; dx <= s.size; ++dx) {
          if (s.disc && dx * dx + dy * dy > s.size * s.size) continue;
          const int x = cx + dx, y = cy + dy;
          if (x < 0 || x >= width || y < 0 || y >= height) continue;
          for (int c = 0; c < 3; ++c) frame.at(y, x, c) = s.color[c];
        }
      }
    }
    clip01(frame);
    clip.frames.push_back(std::move(frame));
  }
  return clip;
}

int generate_synthetic_corpus(const fs::path& out_dir, int n_clips, int width, int height,
                              int frames, uint64_t seed, int threads) {
  if (n_clips < 1) throw std::invalid_argument("generate_synthetic_corpus: n_clips must be >= 1");
  fs::create_directories(out_dir);
  parallel_for(n_clips, threads, [&](int64_t i, int) {
    char id[16];
    std::snprintf(id, sizeof(id), "clip%03d", static_cast<int>(i));
    const VideoClip clip = make_synthetic_clip(id, width, height, frames, seed);
    fs::create_directories(out_dir / id);
    for (int f = 0; f < clip.frame_count(); ++f) {
      char name[16];
      std::snprintf(name, sizeof(name), "%06d.png", f);
      write_png(out_dir / id / name, clip.frames[static_cast<size_t>(f)]);
    }
  });
  return n_clips;
}

}  // namespace srdm
