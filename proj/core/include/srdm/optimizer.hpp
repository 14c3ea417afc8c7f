#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "srdm/error.hpp"
#include "srdm/nn.hpp"

namespace srdm {

/// Adam with decoupled weight decay. The decay is applied to the parameter
/// before the Adam delta; moments are bias-corrected. Internal math runs in
/// double regardless of the parameter type.
template <class T>
class AdamW {
 public:
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void init(const std::vector<Param<T>>& params) {
    m_.clear();
    v_.clear();
    for (const auto& p : params) {
      m_.emplace_back(p.w.size(), 0.0);
      v_.emplace_back(p.w.size(), 0.0);
    }
    t_ = 0;
  }

  int64_t steps_taken() const { return t_; }

  void step(std::vector<Param<T>>& params, const Grads<T>& grads, double lr,
            double weight_decay) {
    for (const auto& g : grads.g) {
      for (const T v : g) {
        if (!std::isfinite(static_cast<double>(v))) {
          throw DivergedTrainingError("optimizer: non-finite gradient");
        }
      }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
    for (size_t pi = 0; pi < params.size(); ++pi) {
      auto& w = params[pi].w;
      const auto& g = grads.g[pi];
      auto& m = m_[pi];
      auto& v = v_[pi];
      for (size_t i = 0; i < w.size(); ++i) {
        double theta = static_cast<double>(w[i]);
        theta *= 1.0 - lr * weight_decay;
        const double gi = static_cast<double>(g[i]);
        m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
        v[i] = beta2 * v[i] + (1.0 - beta2) * gi * gi;
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        theta -= lr * mhat / (std::sqrt(vhat) + eps);
        w[i] = static_cast<T>(theta);
      }
    }
  }

 private:
  std::vector<std::vector<double>> m_, v_;
  int64_t t_ = 0;
};

}  // namespace srdm
