#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "srdm/nn.hpp"
#include "srdm/rng.hpp"

namespace srdm {

enum class Backbone { desk_cnn, resnet50 };

inline const char* backbone_name(Backbone b) {
  return b == Backbone::desk_cnn ? "desk_cnn" : "resnet50";
}

inline Backbone backbone_from_string(const std::string& name) {
  if (name == "desk_cnn") return Backbone::desk_cnn;
  if (name == "resnet50") return Backbone::resnet50;
  throw std::invalid_argument("unknown backbone: " + name);
}

/// Architecture of the encoder f, projector g and classifier c.
struct EncoderConfig {
  int k_frames = 2;
  Backbone backbone = Backbone::desk_cnn;
  std::vector<int> conv_widths = {32, 64, 128, 128};
  int proj_dim = 128;
  std::vector<int> cls_widths = {64, 32};

  int input_channels() const { return 3 * k_frames; }
  int repr_dim() const { return conv_widths.empty() ? 0 : conv_widths.back(); }

  void validate() const {
    if (k_frames < 1 || k_frames > 3) {
      throw std::invalid_argument("encoder: k_frames must be 1, 2 or 3");
    }
    if (conv_widths.empty()) throw std::invalid_argument("encoder: no conv widths");
    for (const int w : conv_widths) {
      if (w < 1) throw std::invalid_argument("encoder: conv width must be positive");
    }
    if (proj_dim < 1) throw std::invalid_argument("encoder: proj_dim must be positive");
    if (cls_widths.size() != 2) {
      throw std::invalid_argument("encoder: classifier needs two hidden widths");
    }
  }
};

/// The trainable stack: stride-2 3x3 conv tower with ReLU and global
/// average pooling (f), a three-layer MLP projector (g), and a three-layer
/// MLP classifier ending in one logit (c). No normalization layers, so the
/// forward pass treats every batch row independently.
template <class T>
class Model {
 public:
  /// Per-row activation caches for backward.
  struct RowCtx {
    std::vector<T> x_norm;
    std::vector<std::vector<T>> cols;      // im2col per conv layer
    std::vector<std::vector<T>> conv_out;  // post-ReLU output per conv layer
    std::vector<int> hs, ws;               // spatial dims entering each conv
    std::vector<T> h;                      // pooled representation
    std::vector<T> p1, p2, z;              // projector activations
    std::vector<T> c1, c2;                 // classifier activations
    T logit = T(0);
    // scratch for backward
    std::vector<T> da, db, dcol;
  };

  explicit Model(const EncoderConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.backbone == Backbone::resnet50) {
      throw std::invalid_argument(
          "resnet50 backbone weights are not bundled; use desk_cnn or supply an external "
          "implementation");
    }
    build();
  }

  const EncoderConfig& config() const { return cfg_; }
  uint64_t init_seed() const { return init_seed_; }
  void set_init_seed(uint64_t s) { init_seed_ = s; }

  std::vector<Param<T>>& params() { return params_; }
  const std::vector<Param<T>>& params() const { return params_; }

  /// Seeded He-style initialization: weights ~ N(0, 2/fan_in), zero biases.
  void init_params(uint64_t seed) {
    init_seed_ = seed;
    Rng rng(Rng::derive_seed(seed, "model.init"));
    for (auto& p : params_) {
      const bool is_bias = p.shape.size() == 1;
      if (is_bias) {
        std::fill(p.w.begin(), p.w.end(), T(0));
      } else {
        const double fan_in = static_cast<double>(p.shape[1]);
        const double std = std::sqrt(2.0 / fan_in);
        for (auto& v : p.w) v = static_cast<T>(std * rng.normal());
      }
    }
  }

  /// Forward one row (C*H*W values in [0,1]); fills ctx.
  void forward_row(const T* x, int h, int w, RowCtx& ctx) const {
    const int n_conv = static_cast<int>(conv_in_.size());
    ctx.cols.resize(static_cast<size_t>(n_conv));
    ctx.conv_out.resize(static_cast<size_t>(n_conv));
    ctx.hs.assign(1, h);
    ctx.ws.assign(1, w);

    // Fixed input normalization: (x - 0.5) / 0.25.
    const int64_t in_n = static_cast<int64_t>(cfg_.input_channels()) * h * w;
    ctx.x_norm.resize(static_cast<size_t>(in_n));
    for (int64_t i = 0; i < in_n; ++i) ctx.x_norm[static_cast<size_t>(i)] = (x[i] - T(0.5)) / T(0.25);

    const T* cur = ctx.x_norm.data();
    int ch = h, cw = w;
    for (int li = 0; li < n_conv; ++li) {
      const int in_c = conv_in_[static_cast<size_t>(li)];
      const int out_c = conv_out_[static_cast<size_t>(li)];
      const int oh = nn::conv_out_dim(ch), ow = nn::conv_out_dim(cw);
      const int64_t patch = static_cast<int64_t>(in_c) * 9;
      const int64_t cols_n = static_cast<int64_t>(oh) * ow;

      nn::im2col_3x3s2(cur, in_c, ch, cw, ctx.cols[static_cast<size_t>(li)]);
      auto& out = ctx.conv_out[static_cast<size_t>(li)];
      out.resize(static_cast<size_t>(out_c) * cols_n);

      Eigen::Map<const nn::MatRM<T>> W(params_[static_cast<size_t>(conv_w_[li])].w.data(), out_c,
                                       patch);
      Eigen::Map<const nn::MatCM<T>> C(ctx.cols[static_cast<size_t>(li)].data(), patch, cols_n);
      Eigen::Map<nn::MatRM<T>> Y(out.data(), out_c, cols_n);
      Y.noalias() = W * C;
      const auto& bias = params_[static_cast<size_t>(conv_b_[li])].w;
      for (int oc = 0; oc < out_c; ++oc) {
        T* row = out.data() + static_cast<int64_t>(oc) * cols_n;
        const T b = bias[static_cast<size_t>(oc)];
        for (int64_t i = 0; i < cols_n; ++i) {
          row[i] += b;
          if (row[i] < T(0)) row[i] = T(0);  // ReLU
        }
      }
      cur = out.data();
      ch = oh;
      cw = ow;
      ctx.hs.push_back(ch);
      ctx.ws.push_back(cw);
    }

    // Global average pooling over the final feature map.
    const int rd = cfg_.repr_dim();
    const int64_t pool_n = static_cast<int64_t>(ch) * cw;
    ctx.h.resize(static_cast<size_t>(rd));
    for (int c = 0; c < rd; ++c) {
      const T* plane = cur + static_cast<int64_t>(c) * pool_n;
      double s = 0.0;
      for (int64_t i = 0; i < pool_n; ++i) s += plane[i];
      ctx.h[static_cast<size_t>(c)] = static_cast<T>(s / static_cast<double>(pool_n));
    }

    // Projector: linear-ReLU-linear-ReLU-linear.
    linear_relu(proj_w_[0], proj_b_[0], ctx.h, ctx.p1, true);
    linear_relu(proj_w_[1], proj_b_[1], ctx.p1, ctx.p2, true);
    linear_relu(proj_w_[2], proj_b_[2], ctx.p2, ctx.z, false);

    // Classifier on the projection.
    linear_relu(cls_w_[0], cls_b_[0], ctx.z, ctx.c1, true);
    linear_relu(cls_w_[1], cls_b_[1], ctx.c1, ctx.c2, true);
    std::vector<T> logit_v;
    linear_relu(cls_w_[2], cls_b_[2], ctx.c2, logit_v, false);
    ctx.logit = logit_v[0];
  }

  /// Backward one row. dz is dLoss/dz from the contrastive terms (may be
  /// null), dlogit is dLoss/dlogit from the classification term. Gradients
  /// accumulate into `grads`. Skips the gradient w.r.t. the raw input.
  void backward_row(const RowCtx& ctx, const T* dz, T dlogit, Grads<T>& grads) const {
    std::vector<T> d_c2, d_c1, d_z, d_p2, d_p1, d_h;

    // Classifier.
    std::vector<T> dl(1, dlogit);
    linear_backward(cls_w_[2], cls_b_[2], ctx.c2, dl, d_c2, grads);
    relu_mask(ctx.c2, d_c2);
    linear_backward(cls_w_[1], cls_b_[1], ctx.c1, d_c2, d_c1, grads);
    relu_mask(ctx.c1, d_c1);
    linear_backward(cls_w_[0], cls_b_[0], ctx.z, d_c1, d_z, grads);

    // dLoss/dz = classifier path + contrastive path.
    if (dz) {
      for (size_t i = 0; i < d_z.size(); ++i) d_z[i] += dz[i];
    }

    // Projector.
    linear_backward(proj_w_[2], proj_b_[2], ctx.p2, d_z, d_p2, grads);
    relu_mask(ctx.p2, d_p2);
    linear_backward(proj_w_[1], proj_b_[1], ctx.p1, d_p2, d_p1, grads);
    relu_mask(ctx.p1, d_p1);
    linear_backward(proj_w_[0], proj_b_[0], ctx.h, d_p1, d_h, grads);

    // GAP backward into the last conv output.
    const int n_conv = static_cast<int>(conv_in_.size());
    const int ch = ctx.hs.back(), cw = ctx.ws.back();
    const int64_t pool_n = static_cast<int64_t>(ch) * cw;
    const int rd = cfg_.repr_dim();
    std::vector<T>& dy = ctx_scratch_a(ctx);
    dy.resize(static_cast<size_t>(rd) * pool_n);
    for (int c = 0; c < rd; ++c) {
      const T g = d_h[static_cast<size_t>(c)] / static_cast<T>(pool_n);
      T* row = dy.data() + static_cast<int64_t>(c) * pool_n;
      for (int64_t i = 0; i < pool_n; ++i) row[i] = g;
    }

    // Conv tower, top down.
    for (int li = n_conv - 1; li >= 0; --li) {
      const int in_c = conv_in_[static_cast<size_t>(li)];
      const int out_c = conv_out_[static_cast<size_t>(li)];
      const int ih = ctx.hs[static_cast<size_t>(li)], iw = ctx.ws[static_cast<size_t>(li)];
      const int oh = nn::conv_out_dim(ih), ow = nn::conv_out_dim(iw);
      const int64_t patch = static_cast<int64_t>(in_c) * 9;
      const int64_t cols_n = static_cast<int64_t>(oh) * ow;

      relu_mask(ctx.conv_out[static_cast<size_t>(li)], dy);

      Eigen::Map<const nn::MatRM<T>> dY(dy.data(), out_c, cols_n);
      Eigen::Map<const nn::MatCM<T>> C(ctx.cols[static_cast<size_t>(li)].data(), patch, cols_n);
      Eigen::Map<nn::MatRM<T>> gW(grads.g[static_cast<size_t>(conv_w_[li])].data(), out_c, patch);
      gW.noalias() += dY * C.transpose();
      auto& gb = grads.g[static_cast<size_t>(conv_b_[li])];
      for (int oc = 0; oc < out_c; ++oc) {
        gb[static_cast<size_t>(oc)] += dY.row(oc).sum();
      }

      if (li == 0) break;  // input gradient unused
      Eigen::Map<const nn::MatRM<T>> W(params_[static_cast<size_t>(conv_w_[li])].w.data(), out_c,
                                       patch);
      std::vector<T>& dcol = ctx_scratch_col(ctx);
      dcol.resize(static_cast<size_t>(patch) * cols_n);
      Eigen::Map<nn::MatCM<T>> dC(dcol.data(), patch, cols_n);
      dC.noalias() = W.transpose() * dY;

      std::vector<T>& dx = ctx_scratch_b(ctx);
      dx.resize(static_cast<size_t>(in_c) * ih * iw);
      nn::col2im_3x3s2(dcol, in_c, ih, iw, dx.data());
      dy.swap(dx);
    }
  }

  // --- spec-level batch operations -------------------------------------

  /// Representations h for a batch (N x repr_dim).
  std::vector<T> encode(const TensorBatch<T>& batch) const {
    check_batch(batch);
    std::vector<T> out(static_cast<size_t>(batch.n) * cfg_.repr_dim());
    RowCtx ctx;
    for (int i = 0; i < batch.n; ++i) {
      forward_row(batch.row(i), batch.h, batch.w, ctx);
      std::copy(ctx.h.begin(), ctx.h.end(),
                out.begin() + static_cast<int64_t>(i) * cfg_.repr_dim());
    }
    return out;
  }

  /// Projections z for representations h (N x proj_dim).
  std::vector<T> project(const std::vector<T>& h, int n) const {
    if (n < 1 || h.size() != static_cast<size_t>(n) * cfg_.repr_dim()) {
      throw std::invalid_argument("project: shape mismatch");
    }
    std::vector<T> out(static_cast<size_t>(n) * cfg_.proj_dim);
    std::vector<T> hi(static_cast<size_t>(cfg_.repr_dim())), p1, p2, z;
    for (int i = 0; i < n; ++i) {
      std::copy_n(h.begin() + static_cast<int64_t>(i) * cfg_.repr_dim(), cfg_.repr_dim(),
                  hi.begin());
      linear_relu(proj_w_[0], proj_b_[0], hi, p1, true);
      linear_relu(proj_w_[1], proj_b_[1], p1, p2, true);
      linear_relu(proj_w_[2], proj_b_[2], p2, z, false);
      std::copy(z.begin(), z.end(), out.begin() + static_cast<int64_t>(i) * cfg_.proj_dim);
    }
    return out;
  }

  /// One logit per projection row.
  std::vector<T> classify(const std::vector<T>& z, int n) const {
    if (n < 1 || z.size() != static_cast<size_t>(n) * cfg_.proj_dim) {
      throw std::invalid_argument("classify: shape mismatch");
    }
    std::vector<T> out(static_cast<size_t>(n));
    std::vector<T> zi(static_cast<size_t>(cfg_.proj_dim)), c1, c2, l;
    for (int i = 0; i < n; ++i) {
      std::copy_n(z.begin() + static_cast<int64_t>(i) * cfg_.proj_dim, cfg_.proj_dim, zi.begin());
      linear_relu(cls_w_[0], cls_b_[0], zi, c1, true);
      linear_relu(cls_w_[1], cls_b_[1], c1, c2, true);
      linear_relu(cls_w_[2], cls_b_[2], c2, l, false);
      out[static_cast<size_t>(i)] = l[0];
    }
    return out;
  }

 private:
  void check_batch(const TensorBatch<T>& batch) const {
    if (batch.n < 1 || batch.c != cfg_.input_channels() || batch.h < 1 || batch.w < 1 ||
        batch.data.size() != static_cast<size_t>(batch.n) * batch.row_size()) {
      throw std::invalid_argument("encode: batch shape mismatch");
    }
  }

  int add_param(const std::string& name, std::vector<int> shape) {
    Param<T> p;
    p.name = name;
    p.shape = std::move(shape);
    p.w.assign(static_cast<size_t>(p.size()), T(0));
    params_.push_back(std::move(p));
    return static_cast<int>(params_.size()) - 1;
  }

  void build() {
    int in_c = cfg_.input_channels();
    int idx = 1;
    for (const int out_c : cfg_.conv_widths) {
      const std::string base = "encoder.conv" + std::to_string(idx);
      conv_in_.push_back(in_c);
      conv_out_.push_back(out_c);
      conv_w_.push_back(add_param(base + ".weight", {out_c, in_c * 9}));
      conv_b_.push_back(add_param(base + ".bias", {out_c}));
      in_c = out_c;
      ++idx;
    }
    const int rd = cfg_.repr_dim();
    const int pd = cfg_.proj_dim;
    const int proj_dims[4] = {rd, pd, pd, pd};
    for (int i = 0; i < 3; ++i) {
      const std::string base = "projector.fc" + std::to_string(i + 1);
      proj_w_[i] = add_param(base + ".weight", {proj_dims[i + 1], proj_dims[i]});
      proj_b_[i] = add_param(base + ".bias", {proj_dims[i + 1]});
    }
    const int cls_dims[4] = {pd, cfg_.cls_widths[0], cfg_.cls_widths[1], 1};
    for (int i = 0; i < 3; ++i) {
      const std::string base = "classifier.fc" + std::to_string(i + 1);
      cls_w_[i] = add_param(base + ".weight", {cls_dims[i + 1], cls_dims[i]});
      cls_b_[i] = add_param(base + ".bias", {cls_dims[i + 1]});
    }
  }

  void linear_relu(int wi, int bi, const std::vector<T>& x, std::vector<T>& y, bool relu) const {
    const auto& W = params_[static_cast<size_t>(wi)];
    const auto& b = params_[static_cast<size_t>(bi)];
    const int out_n = W.shape[0], in_n = W.shape[1];
    y.resize(static_cast<size_t>(out_n));
    Eigen::Map<const nn::MatRM<T>> Wm(W.w.data(), out_n, in_n);
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> xv(x.data(), in_n);
    Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> yv(y.data(), out_n);
    yv.noalias() = Wm * xv;
    for (int i = 0; i < out_n; ++i) {
      y[static_cast<size_t>(i)] += b.w[static_cast<size_t>(i)];
      if (relu && y[static_cast<size_t>(i)] < T(0)) y[static_cast<size_t>(i)] = T(0);
    }
  }

  void linear_backward(int wi, int bi, const std::vector<T>& x, const std::vector<T>& dy,
                       std::vector<T>& dx, Grads<T>& grads) const {
    const auto& W = params_[static_cast<size_t>(wi)];
    const int out_n = W.shape[0], in_n = W.shape[1];
    auto& gW = grads.g[static_cast<size_t>(wi)];
    auto& gb = grads.g[static_cast<size_t>(bi)];
    for (int o = 0; o < out_n; ++o) {
      const T d = dy[static_cast<size_t>(o)];
      gb[static_cast<size_t>(o)] += d;
      T* grow = gW.data() + static_cast<int64_t>(o) * in_n;
      const T* xv = x.data();
      for (int i = 0; i < in_n; ++i) grow[i] += d * xv[i];
    }
    dx.assign(static_cast<size_t>(in_n), T(0));
    Eigen::Map<const nn::MatRM<T>> Wm(W.w.data(), out_n, in_n);
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> dyv(dy.data(), out_n);
    Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> dxv(dx.data(), in_n);
    dxv.noalias() = Wm.transpose() * dyv;
  }

  static void relu_mask(const std::vector<T>& post, std::vector<T>& d) {
    for (size_t i = 0; i < d.size(); ++i) {
      if (post[i] <= T(0)) d[i] = T(0);
    }
  }

  // Backward scratch buffers live in the (mutable) ctx object.
  static std::vector<T>& ctx_scratch_a(const RowCtx& ctx) {
    return const_cast<RowCtx&>(ctx).da;
  }
  static std::vector<T>& ctx_scratch_b(const RowCtx& ctx) {
    return const_cast<RowCtx&>(ctx).db;
  }
  static std::vector<T>& ctx_scratch_col(const RowCtx& ctx) {
    return const_cast<RowCtx&>(ctx).dcol;
  }

  EncoderConfig cfg_;
  uint64_t init_seed_ = 0;
  std::vector<Param<T>> params_;
  std::vector<int> conv_in_, conv_out_, conv_w_, conv_b_;
  int proj_w_[3] = {0, 0, 0}, proj_b_[3] = {0, 0, 0};
  int cls_w_[3] = {0, 0, 0}, cls_b_[3] = {0, 0, 0};
};

}  // namespace srdm
