#pragma once

#include <cstdint>
#include <optional>

namespace srdm {

/// Binary confusion counts; positive class = fake-resolution.
struct ConfusionCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  int64_t fn = 0;

  int64_t total() const { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
};

/// accuracy is always defined for non-empty counts; balanced accuracy and
/// F1 are absent (not silently zero) when a class is missing.
struct Metrics {
  double accuracy = 0.0;
  std::optional<double> balanced_accuracy;
  std::optional<double> f1;
};

/// Throws EmptyInputError when counts are empty, std::invalid_argument on
/// negative counts.
Metrics compute_metrics(const ConfusionCounts& counts);

}  // namespace srdm
