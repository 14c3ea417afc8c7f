#pragma once

#include "srdm/image.hpp"

namespace srdm {

/// Deterministic lossy-compression stand-in for a CRF sweep: blockwise DCT
/// quantization in Y'CbCr. q plays the role of the rate factor; higher q
/// quantizes harder.
struct CompressionParams {
  int q = 23;  // valid range [15, 30]
  static constexpr int block_size = 8;

  bool valid() const { return q >= 15 && q <= 30; }
};

/// Quantizer step multiplier for a given q.
inline double proxy_strength(int q) { return q / 12.0; }

struct ProxyStats {
  int iterations = 0;    // recompression passes used by the last frame
  bool converged = true; // fixed point reached within the iteration cap
};

/// Compress one frame.
///
/// Pipeline: snap to the 8-bit grid, convert to Y'CbCr (BT.601 full range),
/// pad each channel to 8x8 blocks by edge replication, orthonormal 2-D
/// DCT-II, quantize every AC coefficient to round(c/step)*step with
/// step = table[i][j] * (q/12) (JPEG Annex-K luma table for Y, chroma table
/// for Cb/Cr), invert, round back to 8-bit RGB.
///
/// The DC coefficient passes through unquantized, so constant frames
/// survive bit-exactly. The encode/decode pass is iterated until the 8-bit
/// output is a fixed point of recompression, which makes the operation
/// exactly idempotent at fixed q.
ImageTensor compress_frame(const ImageTensor& img, const CompressionParams& params,
                           ProxyStats* stats = nullptr);

/// Compress every frame; records compression_quality = q on the clip.
VideoClip compress_clip(const VideoClip& clip, const CompressionParams& params);

}  // namespace srdm
