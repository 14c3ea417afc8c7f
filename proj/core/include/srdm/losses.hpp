#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace srdm {

/// Counts cosine-similarity evaluations that hit a zero-norm vector (the
/// similarity is defined as 0 there instead of producing NaN).
std::atomic<uint64_t>& zero_norm_counter();

struct LossConfig {
  double margin = 0.2;
  double gamma = 1.0;
  double epsilon = 1e-4;
  bool enable_ce = true;
  bool enable_t = true;
  bool enable_v = true;
  /// Evaluate the triplet expression verbatim as printed (no hinge,
  /// positive-minus-negative orientation) instead of the prose-consistent
  /// hinged form.
  bool paper_literal_triplet = false;

  void validate() const {
    if (margin < 0) throw std::invalid_argument("loss: margin must be >= 0");
    if (gamma <= 0) throw std::invalid_argument("loss: gamma must be > 0");
    if (epsilon <= 0) throw std::invalid_argument("loss: epsilon must be > 0");
    if (!enable_ce && !enable_t && !enable_v) {
      throw std::invalid_argument("loss: at least one term must be enabled");
    }
  }
};

struct LossBreakdown {
  double l_ce = 0.0;
  double l_t = 0.0;
  double l_v = 0.0;
  double total = 0.0;
};

namespace detail {

template <class T>
double dot(const T* u, const T* v, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += static_cast<double>(u[i]) * v[i];
  return s;
}

inline double stable_sigmoid(double y) {
  if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
  const double e = std::exp(y);
  return e / (1.0 + e);
}

inline double softplus(double y) {
  return (y > 0.0 ? y : 0.0) + std::log1p(std::exp(-std::fabs(y)));
}

}  // namespace detail

/// Cosine similarity u.v / (|u||v|) in [-1, 1]; 0 for zero-norm inputs
/// (counted in zero_norm_counter()).
template <class T>
double cosine_sim(const T* u, const T* v, int d) {
  const double nu = std::sqrt(detail::dot(u, u, d));
  const double nv = std::sqrt(detail::dot(v, v, d));
  if (nu == 0.0 || nv == 0.0) {
    zero_norm_counter().fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return detail::dot(u, v, d) / (nu * nv);
}

/// d sim(u,v) / du and / dv, accumulated into gu/gv with factor `scale`.
template <class T>
void cosine_sim_grad(const T* u, const T* v, int d, double scale, T* gu, T* gv) {
  const double nu2 = detail::dot(u, u, d);
  const double nv2 = detail::dot(v, v, d);
  if (nu2 == 0.0 || nv2 == 0.0) return;  // sim defined constant 0 here
  const double nu = std::sqrt(nu2), nv = std::sqrt(nv2);
  const double uv = detail::dot(u, v, d);
  const double inv = 1.0 / (nu * nv);
  const double su = uv / (nu2 * nu * nv);  // sim/|u|^2 factor
  const double sv = uv / (nv2 * nv * nu);
  for (int i = 0; i < d; ++i) {
    gu[i] += static_cast<T>(scale * (v[i] * inv - u[i] * su));
    gv[i] += static_cast<T>(scale * (u[i] * inv - v[i] * sv));
  }
}

/// Triplet loss over N (anchor, positive, negative) projection rows:
/// mean_i max(0, sim(a_i,n_i) - sim(a_i,p_i) + m). With `literal` the
/// expression is evaluated as printed: mean_i (sim(a_i,p_i) - sim(a_i,n_i) + m),
/// unhinged.
template <class T>
double triplet_loss(const T* A, const T* P, const T* N, int n, int d, double margin,
                    bool literal = false) {
  if (n < 1 || d < 1) throw std::invalid_argument("triplet_loss: empty batch");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const T* a = A + static_cast<int64_t>(i) * d;
    const T* p = P + static_cast<int64_t>(i) * d;
    const T* g = N + static_cast<int64_t>(i) * d;
    const double s_ap = cosine_sim(a, p, d);
    const double s_an = cosine_sim(a, g, d);
    if (literal) {
      acc += s_ap - s_an + margin;
    } else {
      acc += std::max(0.0, s_an - s_ap + margin);
    }
  }
  return acc / n;
}

template <class T>
void triplet_loss_grad(const T* A, const T* P, const T* N, int n, int d, double margin,
                       bool literal, double scale, T* gA, T* gP, T* gN) {
  const double inv_n = scale / n;
  for (int i = 0; i < n; ++i) {
    const int64_t off = static_cast<int64_t>(i) * d;
    const T* a = A + off;
    const T* p = P + off;
    const T* g = N + off;
    if (literal) {
      cosine_sim_grad(a, p, d, inv_n, gA + off, gP + off);
      cosine_sim_grad(a, g, d, -inv_n, gA + off, gN + off);
    } else {
      const double arg = cosine_sim(a, g, d) - cosine_sim(a, p, d) + margin;
      if (arg > 0.0) {
        cosine_sim_grad(a, g, d, inv_n, gA + off, gN + off);
        cosine_sim_grad(a, p, d, -inv_n, gA + off, gP + off);
      }
    }
  }
}

/// Variance hinge for one batch H (n x d):
/// (1/d) sum_j max(0, gamma - sqrt(Var(h^j) + eps)), population variance.
template <class T>
double variance_hinge(const T* H, int n, int d, double gamma, double eps) {
  if (n < 2) throw std::invalid_argument("variance loss: batch size must be >= 2");
  double acc = 0.0;
  for (int j = 0; j < d; ++j) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += H[static_cast<int64_t>(i) * d + j];
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dev = H[static_cast<int64_t>(i) * d + j] - mean;
      var += dev * dev;
    }
    var /= n;
    const double s = std::sqrt(var + eps);
    if (s < gamma) acc += gamma - s;
  }
  return acc / d;
}

template <class T>
void variance_hinge_grad(const T* H, int n, int d, double gamma, double eps, double scale, T* gH) {
  if (n < 2) throw std::invalid_argument("variance loss: batch size must be >= 2");
  for (int j = 0; j < d; ++j) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += H[static_cast<int64_t>(i) * d + j];
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dev = H[static_cast<int64_t>(i) * d + j] - mean;
      var += dev * dev;
    }
    var /= n;
    const double s = std::sqrt(var + eps);
    if (s >= gamma) continue;  // hinge inactive
    const double f = -scale / (static_cast<double>(d) * n * s);
    for (int i = 0; i < n; ++i) {
      const double dev = H[static_cast<int64_t>(i) * d + j] - mean;
      gH[static_cast<int64_t>(i) * d + j] += static_cast<T>(f * dev);
    }
  }
}

/// L_V = v(H_a) + v(H_n) + v(H_p).
template <class T>
double variance_loss(const T* A, const T* P, const T* N, int n, int d, double gamma, double eps) {
  return variance_hinge(A, n, d, gamma, eps) + variance_hinge(N, n, d, gamma, eps) +
         variance_hinge(P, n, d, gamma, eps);
}

/// Mean binary cross-entropy of n logits against a constant target, in the
/// numerically stable softplus form.
template <class T>
double binary_ce(const T* logits, int n, double target) {
  if (n < 1) throw std::invalid_argument("binary_ce: empty batch");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = logits[i];
    acc += detail::softplus(y) - target * y;
  }
  return acc / n;
}

template <class T>
void binary_ce_grad(const T* logits, int n, double target, double scale, T* g) {
  const double inv_n = scale / n;
  for (int i = 0; i < n; ++i) {
    g[i] += static_cast<T>(inv_n * (detail::stable_sigmoid(logits[i]) - target));
  }
}

/// L_CE = 1/4 CE(C_a,0) + 1/4 CE(C_p,0) + 1/2 CE(C_n,1).
template <class T>
double cross_entropy_loss(const T* Ca, const T* Cp, const T* Cn, int n) {
  return 0.25 * binary_ce(Ca, n, 0.0) + 0.25 * binary_ce(Cp, n, 0.0) +
         0.5 * binary_ce(Cn, n, 1.0);
}

template <class T>
void cross_entropy_loss_grad(const T* Ca, const T* Cp, const T* Cn, int n, double scale, T* gCa,
                             T* gCp, T* gCn) {
  binary_ce_grad(Ca, n, 0.0, 0.25 * scale, gCa);
  binary_ce_grad(Cp, n, 0.0, 0.25 * scale, gCp);
  binary_ce_grad(Cn, n, 1.0, 0.5 * scale, gCn);
}

/// Unweighted sum of the enabled terms.
template <class T>
LossBreakdown total_loss(const T* Za, const T* Zp, const T* Zn, int n, int d, const T* Ca,
                         const T* Cp, const T* Cn, const LossConfig& cfg) {
  cfg.validate();
  LossBreakdown out;
  if (cfg.enable_ce) out.l_ce = cross_entropy_loss(Ca, Cp, Cn, n);
  if (cfg.enable_t) out.l_t = triplet_loss(Za, Zp, Zn, n, d, cfg.margin, cfg.paper_literal_triplet);
  if (cfg.enable_v) out.l_v = variance_loss(Za, Zp, Zn, n, d, cfg.gamma, cfg.epsilon);
  out.total = out.l_ce + out.l_t + out.l_v;
  return out;
}

/// Gradients of total_loss w.r.t. projections and logits (outputs are
/// zeroed first). Returns the same breakdown as total_loss.
template <class T>
LossBreakdown total_loss_grad(const T* Za, const T* Zp, const T* Zn, int n, int d, const T* Ca,
                              const T* Cp, const T* Cn, const LossConfig& cfg, T* gZa, T* gZp,
                              T* gZn, T* gCa, T* gCp, T* gCn) {
  cfg.validate();
  const int64_t zn = static_cast<int64_t>(n) * d;
  std::fill(gZa, gZa + zn, T(0));
  std::fill(gZp, gZp + zn, T(0));
  std::fill(gZn, gZn + zn, T(0));
  std::fill(gCa, gCa + n, T(0));
  std::fill(gCp, gCp + n, T(0));
  std::fill(gCn, gCn + n, T(0));

  LossBreakdown out;
  if (cfg.enable_ce) {
    out.l_ce = cross_entropy_loss(Ca, Cp, Cn, n);
    cross_entropy_loss_grad(Ca, Cp, Cn, n, 1.0, gCa, gCp, gCn);
  }
  if (cfg.enable_t) {
    out.l_t = triplet_loss(Za, Zp, Zn, n, d, cfg.margin, cfg.paper_literal_triplet);
    triplet_loss_grad(Za, Zp, Zn, n, d, cfg.margin, cfg.paper_literal_triplet, 1.0, gZa, gZp, gZn);
  }
  if (cfg.enable_v) {
    out.l_v = variance_loss(Za, Zp, Zn, n, d, cfg.gamma, cfg.epsilon);
    variance_hinge_grad(Za, n, d, cfg.gamma, cfg.epsilon, 1.0, gZa);
    variance_hinge_grad(Zn, n, d, cfg.gamma, cfg.epsilon, 1.0, gZn);
    variance_hinge_grad(Zp, n, d, cfg.gamma, cfg.epsilon, 1.0, gZp);
  }
  out.total = out.l_ce + out.l_t + out.l_v;
  return out;
}

}  // namespace srdm
