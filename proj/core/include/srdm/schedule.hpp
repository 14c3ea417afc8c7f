#pragma once

#include <cstdint>

namespace srdm {

/// Closed-form learning-rate schedule: linear warmup from init_lr to
/// peak_lr over warmup_steps, then cosine decay to final_lr at total_steps.
struct Schedule {
  int64_t total_steps = 0;
  int64_t warmup_steps = 0;
  double init_lr = 5e-6;
  double peak_lr = 2e-5;
  double final_lr = 0.0;
};

/// lr at an optimizer step in [0, total_steps]. Out-of-range steps throw
/// std::invalid_argument.
double lr_at(const Schedule& s, int64_t step);

}  // namespace srdm
