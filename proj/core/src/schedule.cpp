#include "srdm/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace srdm {

double lr_at(const Schedule& s, int64_t step) {
  if (s.total_steps < 1 || s.warmup_steps < 0 || s.warmup_steps > s.total_steps) {
    throw std::invalid_argument("schedule: bad step counts");
  }
  if (s.init_lr < 0 || s.peak_lr < s.init_lr || s.final_lr < 0) {
    throw std::invalid_argument("schedule: bad learning rates");
  }
  if (step < 0 || step > s.total_steps) {
    throw std::invalid_argument("schedule: step out of range");
  }
  if (step < s.warmup_steps) {
    return s.init_lr +
           (s.peak_lr - s.init_lr) * static_cast<double>(step) / static_cast<double>(s.warmup_steps);
  }
  if (s.total_steps == s.warmup_steps) return s.peak_lr;
  const double progress =
      static_cast<double>(step - s.warmup_steps) / static_cast<double>(s.total_steps - s.warmup_steps);
  return s.final_lr + 0.5 * (s.peak_lr - s.final_lr) * (1.0 + std::cos(M_PI * progress));
}

}  // namespace srdm
