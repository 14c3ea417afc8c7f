#include "srdm/dct_proxy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace srdm {

namespace {

constexpr int kB = CompressionParams::block_size;
constexpr int kMaxIterations = 64;

// JPEG Annex-K base quantization tables.
constexpr int kLumaTable[kB][kB] = {
    {16, 11, 10, 16, 24, 40, 51, 61},
    {12, 12, 14, 19, 26, 58, 60, 55},
    {14, 13, 16, 24, 40, 57, 69, 56},
    {14, 17, 22, 29, 51, 87, 80, 62},
    {18, 22, 37, 56, 68, 109, 103, 77},
    {24, 35, 55, 64, 81, 104, 113, 92},
    {49, 64, 78, 87, 103, 121, 120, 101},
    {72, 92, 95, 98, 112, 100, 103, 99},
};
constexpr int kChromaTable[kB][kB] = {
    {17, 18, 24, 47, 99, 99, 99, 99},
    {18, 21, 26, 66, 99, 99, 99, 99},
    {24, 26, 56, 99, 99, 99, 99, 99},
    {47, 66, 99, 99, 99, 99, 99, 99},
    {99, 99, 99, 99, 99, 99, 99, 99},
    {99, 99, 99, 99, 99, 99, 99, 99},
    {99, 99, 99, 99, 99, 99, 99, 99},
    {99, 99, 99, 99, 99, 99, 99, 99},
};

struct DctBasis {
  double m[kB][kB];  // m[k][n] = alpha_k cos(pi (2n+1) k / 16)
  DctBasis() {
    for (int k = 0; k < kB; ++k) {
      const double alpha = k == 0 ? std::sqrt(1.0 / kB) : std::sqrt(2.0 / kB);
      for (int n = 0; n < kB; ++n) {
        m[k][n] = alpha * std::cos(M_PI * (2 * n + 1) * k / (2.0 * kB));
      }
    }
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

// Channel plane padded to multiples of 8, values centered around 0.
struct Plane {
  int w = 0, h = 0;        // payload size
  int pw = 0, ph = 0;      // padded size
  std::vector<double> v;   // padded, row-major

  Plane(int width, int height)
      : w(width), h(height), pw((width + kB - 1) / kB * kB), ph((height + kB - 1) / kB * kB),
        v(static_cast<size_t>(pw) * ph) {}

  double& at(int y, int x) { return v[static_cast<size_t>(y) * pw + x]; }
  double at(int y, int x) const { return v[static_cast<size_t>(y) * pw + x]; }

  void replicate_edges() {
    for (int y = 0; y < h; ++y) {
      for (int x = w; x < pw; ++x) at(y, x) = at(y, w - 1);
    }
    for (int y = h; y < ph; ++y) {
      for (int x = 0; x < pw; ++x) at(y, x) = at(h - 1, x);
    }
  }
};

// One encode/decode pass over 8-bit RGB pixels. in/out are 0..255 integer
// values stored as uint8_t planes interleaved like ImageTensor.
void codec_pass(const std::vector<uint8_t>& in, std::vector<uint8_t>& out, int w, int h,
                double strength) {
  Plane yp(w, h), cb(w, h), cr(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t i = (static_cast<size_t>(y) * w + x) * 3;
      const double r = in[i], g = in[i + 1], b = in[i + 2];
      yp.at(y, x) = 0.299 * r + 0.587 * g + 0.114 * b - 128.0;
      cb.at(y, x) = -0.168736 * r - 0.331264 * g + 0.5 * b;
      cr.at(y, x) = 0.5 * r - 0.418688 * g - 0.081312 * b;
    }
  }
  yp.replicate_edges();
  cb.replicate_edges();
  cr.replicate_edges();

  const DctBasis& M = basis();
  auto process = [&](Plane& p, const int (&table)[kB][kB]) {
    double blk[kB][kB], tmp[kB][kB], coef[kB][kB];
    for (int by = 0; by < p.ph; by += kB) {
      for (int bx = 0; bx < p.pw; bx += kB) {
        for (int y = 0; y < kB; ++y)
          for (int x = 0; x < kB; ++x) blk[y][x] = p.at(by + y, bx + x);
        // coef = M blk M^T
        for (int k = 0; k < kB; ++k)
          for (int x = 0; x < kB; ++x) {
            double s = 0.0;
            for (int n = 0; n < kB; ++n) s += M.m[k][n] * blk[n][x];
            tmp[k][x] = s;
          }
        for (int k = 0; k < kB; ++k)
          for (int l = 0; l < kB; ++l) {
            double s = 0.0;
            for (int n = 0; n < kB; ++n) s += tmp[k][n] * M.m[l][n];
            coef[k][l] = s;
          }
        // Quantize AC; the DC coefficient passes through so flat content
        // survives the round trip unchanged.
        for (int k = 0; k < kB; ++k)
          for (int l = 0; l < kB; ++l) {
            if (k == 0 && l == 0) continue;
            const double step = table[k][l] * strength;
            coef[k][l] = std::round(coef[k][l] / step) * step;
          }
        // blk = M^T coef M
        for (int n = 0; n < kB; ++n)
          for (int l = 0; l < kB; ++l) {
            double s = 0.0;
            for (int k = 0; k < kB; ++k) s += M.m[k][n] * coef[k][l];
            tmp[n][l] = s;
          }
        for (int y = 0; y < kB; ++y)
          for (int x = 0; x < kB; ++x) {
            double s = 0.0;
            for (int l = 0; l < kB; ++l) s += tmp[y][l] * M.m[l][x];
            p.at(by + y, bx + x) = s;
          }
      }
    }
  };
  process(yp, kLumaTable);
  process(cb, kChromaTable);
  process(cr, kChromaTable);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double Y = yp.at(y, x) + 128.0;
      const double Cb = cb.at(y, x);
      const double Cr = cr.at(y, x);
      const double r = Y + 1.402 * Cr;
      const double g = Y - 0.344136 * Cb - 0.714136 * Cr;
      const double b = Y + 1.772 * Cb;
      const size_t i = (static_cast<size_t>(y) * w + x) * 3;
      out[i] = static_cast<uint8_t>(std::clamp(std::lround(r), 0l, 255l));
      out[i + 1] = static_cast<uint8_t>(std::clamp(std::lround(g), 0l, 255l));
      out[i + 2] = static_cast<uint8_t>(std::clamp(std::lround(b), 0l, 255l));
    }
  }
}

}  // namespace

ImageTensor compress_frame(const ImageTensor& img, const CompressionParams& params,
                           ProxyStats* stats) {
  if (!params.valid()) throw std::invalid_argument("compress_frame: q must be in [15,30]");
  if (img.width < 1 || img.height < 1) throw std::invalid_argument("compress_frame: empty image");

  const double strength = proxy_strength(params.q);
  std::vector<uint8_t> cur(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) {
    cur[i] = static_cast<uint8_t>(
        std::clamp(std::lround(static_cast<double>(img.data[i]) * 255.0), 0l, 255l));
  }

  // Iterate recompression to a fixed point. Once cur == codec_pass(cur) the
  // whole operation is exactly idempotent: a second compress_frame call
  // starts from the fixed point and exits after one pass.
  std::vector<uint8_t> next(cur.size());
  int iter = 0;
  bool converged = false;
  for (; iter < kMaxIterations; ++iter) {
    codec_pass(cur, next, img.width, img.height, strength);
    if (next == cur) {
      converged = true;
      break;
    }
    cur.swap(next);
  }
  if (stats) {
    stats->iterations = iter + (converged ? 1 : 0);
    stats->converged = converged;
  }

  ImageTensor out(img.width, img.height);
  for (size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = static_cast<float>(cur[i]) / 255.0f;
  }
  return out;
}

VideoClip compress_clip(const VideoClip& clip, const CompressionParams& params) {
  if (!params.valid()) throw std::invalid_argument("compress_clip: q must be in [15,30]");
  VideoClip out;
  out.id = clip.id;
  out.source_label = clip.source_label;
  out.provenance = clip.provenance;
  out.compression_quality = params.q;
  out.frames.reserve(clip.frames.size());
  for (const auto& f : clip.frames) out.frames.push_back(compress_frame(f, params));
  return out;
}

}  // namespace srdm
