#include "srdm/metrics.hpp"

#include <stdexcept>

#include "srdm/error.hpp"

namespace srdm {

Metrics compute_metrics(const ConfusionCounts& c) {
  if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0) {
    throw std::invalid_argument("compute_metrics: negative counts");
  }
  const int64_t total = c.total();
  if (total == 0) throw EmptyInputError("compute_metrics: no evaluated units");

  Metrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
  if (c.tp + c.fn > 0 && c.tn + c.fp > 0) {
    const double tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    const double tnr = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    m.balanced_accuracy = 0.5 * (tpr + tnr);
  }
  if (2 * c.tp + c.fp + c.fn > 0) {
    m.f1 = static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
  }
  return m;
}

}  // namespace srdm
