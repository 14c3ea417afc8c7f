#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace srdm {

/// Named trainable array.
template <class T>
struct Param {
  std::string name;
  std::vector<int> shape;
  std::vector<T> w;

  int64_t size() const {
    int64_t n = 1;
    for (const int s : shape) n *= s;
    return n;
  }
};

/// Gradient accumulators aligned with a model's parameter list.
template <class T>
struct Grads {
  std::vector<std::vector<T>> g;

  template <class P>
  void init_like(const std::vector<P>& params) {
    g.clear();
    g.reserve(params.size());
    for (const auto& p : params) g.emplace_back(p.w.size(), T(0));
  }
  void zero() {
    for (auto& v : g) std::fill(v.begin(), v.end(), T(0));
  }
  void add(const Grads& other) {
    for (size_t i = 0; i < g.size(); ++i) {
      const auto& o = other.g[i];
      for (size_t j = 0; j < o.size(); ++j) g[i][j] += o[j];
    }
  }
};

/// N rows of C x H x W input values.
template <class T>
struct TensorBatch {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<T> data;

  TensorBatch() = default;
  TensorBatch(int n_, int c_, int h_, int w_)
      : n(n_), c(c_), h(h_), w(w_),
        data(static_cast<size_t>(n_) * c_ * h_ * w_, T(0)) {
    if (n_ < 1) throw std::invalid_argument("TensorBatch: N must be >= 1");
  }

  int64_t row_size() const { return static_cast<int64_t>(c) * h * w; }
  T* row(int i) { return data.data() + static_cast<int64_t>(i) * row_size(); }
  const T* row(int i) const { return data.data() + static_cast<int64_t>(i) * row_size(); }
};

namespace nn {

template <class T>
using MatRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using MatCM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

inline int conv_out_dim(int in) { return (in + 1) / 2; }  // 3x3, stride 2, pad 1

/// im2col for a 3x3/stride-2/pad-1 convolution. col is (in_c*9) x (oh*ow),
/// column-major; out-of-bounds taps contribute zero.
template <class T>
void im2col_3x3s2(const T* x, int in_c, int h, int w, std::vector<T>& col) {
  const int oh = conv_out_dim(h), ow = conv_out_dim(w);
  const int64_t patch = static_cast<int64_t>(in_c) * 9;
  const int64_t cols = static_cast<int64_t>(oh) * ow;
  col.assign(static_cast<size_t>(patch * cols), T(0));
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      T* dst = col.data() + (static_cast<int64_t>(oy) * ow + ox) * patch;
      for (int ic = 0; ic < in_c; ++ic) {
        const T* plane = x + static_cast<int64_t>(ic) * h * w;
        for (int ky = 0; ky < 3; ++ky) {
          const int iy = 2 * oy - 1 + ky;
          T* d = dst + (ic * 3 + ky) * 3;
          if (iy < 0 || iy >= h) continue;
          const T* src = plane + static_cast<int64_t>(iy) * w;
          for (int kx = 0; kx < 3; ++kx) {
            const int ix = 2 * ox - 1 + kx;
            if (ix >= 0 && ix < w) d[kx] = src[ix];
          }
        }
      }
    }
  }
}

/// Scatter-add the columns back: inverse layout of im2col_3x3s2.
template <class T>
void col2im_3x3s2(const std::vector<T>& dcol, int in_c, int h, int w, T* dx) {
  const int oh = conv_out_dim(h), ow = conv_out_dim(w);
  const int64_t patch = static_cast<int64_t>(in_c) * 9;
  std::fill(dx, dx + static_cast<int64_t>(in_c) * h * w, T(0));
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      const T* src = dcol.data() + (static_cast<int64_t>(oy) * ow + ox) * patch;
      for (int ic = 0; ic < in_c; ++ic) {
        T* plane = dx + static_cast<int64_t>(ic) * h * w;
        for (int ky = 0; ky < 3; ++ky) {
          const int iy = 2 * oy - 1 + ky;
          if (iy < 0 || iy >= h) continue;
          const T* s = src + (ic * 3 + ky) * 3;
          T* drow = plane + static_cast<int64_t>(iy) * w;
          for (int kx = 0; kx < 3; ++kx) {
            const int ix = 2 * ox - 1 + kx;
            if (ix >= 0 && ix < w) drow[ix] += s[kx];
          }
        }
      }
    }
  }
}

}  // namespace nn
}  // namespace srdm
