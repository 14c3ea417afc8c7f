#pragma once

#include <optional>
#include <string>

#include "srdm/image.hpp"
#include "srdm/rng.hpp"

namespace srdm {

enum class AblationTransform { blur, gauss_noise, jpeg_proxy };

AblationTransform ablation_from_string(const std::string& name);
const char* ablation_name(AblationTransform t);

/// Augmentation settings. Crop and cutout are the production transforms;
/// the ablation transform is for study configurations only.
struct AugConfig {
  int crop = 64;
  int cutout_count = 1;
  int cutout_min = 8;   // defaults crop/8 .. crop/4
  int cutout_max = 16;
  std::optional<AblationTransform> ablation;

  // Ablation parameter ranges.
  double blur_sigma_lo = 0.5, blur_sigma_hi = 1.5;
  double noise_sigma_lo = 0.005, noise_sigma_hi = 0.02;
  int jpeg_q_lo = 15, jpeg_q_hi = 30;

  void validate(int frame_w, int frame_h) const;
};

/// Crop all k frames at one shared random offset; output is size x size.
FramePair random_crop(const FramePair& pair, int size, Rng& rng);

/// Deterministic center crop (inference path).
FramePair center_crop(const FramePair& pair, int size);

/// Mask cfg.cutout_count random rectangles with mid-gray (0.5); the same
/// rectangles are applied to every frame of the pair. Rectangles may be
/// clipped at borders.
FramePair cutout(const FramePair& pair, const AugConfig& cfg, Rng& rng);

/// Study-only transform: Gaussian blur, additive Gaussian noise, or the
/// blockwise compression proxy, with parameters drawn from cfg's ranges.
/// Parameters are shared across the pair's frames.
FramePair ablation_transform(const FramePair& pair, AblationTransform which, const AugConfig& cfg,
                             Rng& rng);

/// Full training pipeline: crop, cutout, then the optional ablation
/// transform.
FramePair augment(const FramePair& pair, const AugConfig& cfg, Rng& rng);

/// Gaussian blur with the given sigma (separable, edge clamped).
ImageTensor gaussian_blur(const ImageTensor& img, double sigma);

}  // namespace srdm
