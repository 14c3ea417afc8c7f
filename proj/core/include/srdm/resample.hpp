#pragma once

#include <string>

#include "srdm/image.hpp"

namespace srdm {

enum class Kernel { nearest, bilinear, bicubic, lanczos3 };

const char* kernel_name(Kernel k);
Kernel kernel_from_string(const std::string& name);

/// Continuous kernel weight at offset x. bicubic is the Keys cubic with
/// a = -0.5; lanczos3 the 3-lobe windowed sinc. nearest has no continuous
/// form and is handled by index selection in resample().
double kernel_weight(Kernel k, double x);

/// Support radius of the kernel (taps cover (-support, +support)).
int kernel_support(Kernel k);

/// Separable resampling with center-aligned coordinate mapping and
/// clamp-to-edge handling. Tap weights for each output pixel are
/// normalized to sum to 1, so constant images are preserved. Output values
/// are clipped to [0,1].
ImageTensor resample(const ImageTensor& img, int out_w, int out_h, Kernel kernel);

}  // namespace srdm
