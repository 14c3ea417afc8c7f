#include "srdm/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace srdm {

const char* kernel_name(Kernel k) {
  switch (k) {
    case Kernel::nearest: return "nearest";
    case Kernel::bilinear: return "bilinear";
    case Kernel::bicubic: return "bicubic";
    case Kernel::lanczos3: return "lanczos3";
  }
  return "?";
}

Kernel kernel_from_string(const std::string& name) {
  if (name == "nearest") return Kernel::nearest;
  if (name == "bilinear") return Kernel::bilinear;
  if (name == "bicubic") return Kernel::bicubic;
  if (name == "lanczos3") return Kernel::lanczos3;
  throw std::invalid_argument("unknown resampling kernel: " + name);
}

int kernel_support(Kernel k) {
  switch (k) {
    case Kernel::nearest: return 1;
    case Kernel::bilinear: return 1;
    case Kernel::bicubic: return 2;
    case Kernel::lanczos3: return 3;
  }
  return 1;
}

static double keys_cubic(double x) {
  // Keys piecewise cubic, a = -0.5.
  constexpr double a = -0.5;
  x = std::fabs(x);
  if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return a * (x * x * x - 5.0 * x * x + 8.0 * x - 4.0);
  return 0.0;
}

static double lanczos3(double x) {
  x = std::fabs(x);
  if (x >= 3.0) return 0.0;
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return 3.0 * std::sin(px) * std::sin(px / 3.0) / (px * px);
}

double kernel_weight(Kernel k, double x) {
  switch (k) {
    case Kernel::nearest:
      // Selection kernel; resample() picks the enclosing source pixel.
      return std::fabs(x) <= 0.5 ? 1.0 : 0.0;
    case Kernel::bilinear: {
      const double ax = std::fabs(x);
      return ax < 1.0 ? 1.0 - ax : 0.0;
    }
    case Kernel::bicubic: return keys_cubic(x);
    case Kernel::lanczos3: return lanczos3(x);
  }
  return 0.0;
}

namespace {

struct TapSet {
  int first = 0;
  std::vector<double> w;  // normalized; taps are clamped to the edge on read
};

std::vector<TapSet> build_taps(int in_size, int out_size, Kernel kernel) {
  std::vector<TapSet> taps(static_cast<size_t>(out_size));
  const double scale = static_cast<double>(in_size) / out_size;
  const int support = kernel_support(kernel);
  for (int i = 0; i < out_size; ++i) {
    TapSet& t = taps[static_cast<size_t>(i)];
    if (kernel == Kernel::nearest) {
      const int idx = std::clamp(
          static_cast<int>(std::floor((i + 0.5) * scale)), 0, in_size - 1);
      t.first = idx;
      t.w = {1.0};
      continue;
    }
    const double center = (i + 0.5) * scale - 0.5;
    const int base = static_cast<int>(std::floor(center));
    t.first = base - support + 1;
    const int count = 2 * support;
    t.w.resize(static_cast<size_t>(count));
    double sum = 0.0;
    for (int j = 0; j < count; ++j) {
      const double w = kernel_weight(kernel, center - (t.first + j));
      t.w[static_cast<size_t>(j)] = w;
      sum += w;
    }
    // Partition of unity at every output position, including near edges.
    for (double& w : t.w) w /= sum;
  }
  return taps;
}

}  // namespace

ImageTensor resample(const ImageTensor& img, int out_w, int out_h, Kernel kernel) {
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("resample: output dims must be >= 1");
  if (img.width < 1 || img.height < 1) throw std::invalid_argument("resample: empty input");

  const auto htaps = build_taps(img.width, out_w, kernel);
  const auto vtaps = build_taps(img.height, out_h, kernel);

  // Horizontal pass into a double intermediate, then vertical pass.
  std::vector<double> mid(static_cast<size_t>(img.height) * out_w * 3);
  for (int y = 0; y < img.height; ++y) {
    const float* row = &img.data[static_cast<size_t>(y) * img.width * 3];
    double* mrow = &mid[static_cast<size_t>(y) * out_w * 3];
    for (int x = 0; x < out_w; ++x) {
      const TapSet& t = htaps[static_cast<size_t>(x)];
      double acc[3] = {0.0, 0.0, 0.0};
      for (size_t j = 0; j < t.w.size(); ++j) {
        const int sx = std::clamp(t.first + static_cast<int>(j), 0, img.width - 1);
        const double w = t.w[j];
        acc[0] += w * row[sx * 3 + 0];
        acc[1] += w * row[sx * 3 + 1];
        acc[2] += w * row[sx * 3 + 2];
      }
      mrow[x * 3 + 0] = acc[0];
      mrow[x * 3 + 1] = acc[1];
      mrow[x * 3 + 2] = acc[2];
    }
  }

  ImageTensor out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    const TapSet& t = vtaps[static_cast<size_t>(y)];
    float* orow = &out.data[static_cast<size_t>(y) * out_w * 3];
    for (int x = 0; x < out_w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (size_t j = 0; j < t.w.size(); ++j) {
        const int sy = std::clamp(t.first + static_cast<int>(j), 0, img.height - 1);
        const double* mrow = &mid[(static_cast<size_t>(sy) * out_w + x) * 3];
        const double w = t.w[j];
        acc[0] += w * mrow[0];
        acc[1] += w * mrow[1];
        acc[2] += w * mrow[2];
      }
      orow[x * 3 + 0] = static_cast<float>(std::clamp(acc[0], 0.0, 1.0));
      orow[x * 3 + 1] = static_cast<float>(std::clamp(acc[1], 0.0, 1.0));
      orow[x * 3 + 2] = static_cast<float>(std::clamp(acc[2], 0.0, 1.0));
    }
  }
  return out;
}

}  // namespace srdm
