#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "srdm/image.hpp"
#include "srdm/manifest.hpp"
#include "srdm/metrics.hpp"
#include "srdm/model.hpp"
#include "srdm/sampler.hpp"

namespace srdm {

struct DetectOptions {
  int crop = 64;            // inference window side (deterministic center crop)
  int stride = 1;           // consecutive-window stride
  double p_threshold = 0.5; // a window "detects" when probability > this
  double frac_threshold = 0.05;
  bool tiled = false;       // average tile probabilities over the whole frame
  int threads = 1;
};

/// Sigmoid of the classifier logit for one frame pair (center crop, no
/// augmentation).
double score_pair(const Model<float>& model, const FramePair& pair, const DetectOptions& opts);

/// The video-level aggregation rule: fake iff detected/total >= frac
/// (boundary inclusive).
bool verdict_is_fake(int64_t detected, int64_t total, double frac_threshold);

struct VideoDetection {
  std::string clip_id;
  std::string variant_path;
  Label truth = Label::real;
  std::string upscaler;
  bool compressed = false;
  std::vector<double> probs;  // one per scored window
  double fraction = 0.0;
  Label verdict = Label::real;
};

/// Score every k-frame window of the clip at the configured stride and
/// apply the aggregation rule. Throws std::invalid_argument when the clip
/// is shorter than k frames.
VideoDetection detect_video(const Model<float>& model, const VideoClip& clip,
                            const DetectOptions& opts);

struct StratumResult {
  std::string key;  // "real" or the upscaler name
  bool compressed = false;
  ConfusionCounts counts;
  Metrics metrics;
};

struct DetectionReport {
  std::string config_digest;
  std::string checkpoint_digest;
  std::string split;
  std::vector<VideoDetection> videos;
  ConfusionCounts overall;
  Metrics overall_metrics;
  std::vector<StratumResult> strata;     // partition by (upscaler-or-real, regime)
  std::vector<StratumResult> summaries;  // per-regime pooled + "all"

  std::string to_json() const;
  static DetectionReport from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;

  /// Pooled metrics for one compression regime (key "all").
  const StratumResult* regime_summary(bool compressed) const;
};

/// Detect every video of a manifest split and assemble the stratified
/// report. Throws EmptyInputError when the split has no entries.
DetectionReport evaluate_corpus(const Model<float>& model, const DatasetManifest& manifest,
                                const std::filesystem::path& root, Split split,
                                const DetectOptions& opts,
                                std::shared_ptr<FrameCache> cache = nullptr);

/// Plain-text rendering of the stratified table.
std::string report_table(const DetectionReport& report);
std::string report_csv(const DetectionReport& report);

}  // namespace srdm
