#pragma once

#include <utility>

#include "locus/image.hpp"

namespace locus {

/// Inclusive row/column indices into the original image.
struct CropRect {
  Index top = 0;
  Index bottom = 0;
  Index left = 0;
  Index right = 0;

  Index height() const { return bottom - top + 1; }
  Index width() const { return right - left + 1; }
  bool operator==(const CropRect&) const = default;
};

struct FrameParams {
  int black_lightness = 20;        // lightness < this => black pixel
  double black_row_fraction = 0.60;  // >= this fraction of black pixels => frame line
  double max_frame_fraction = 0.40;  // per-side removal cap
};

/// Scans the four main directions independently on the original image and
/// crops away contiguous frame lines. Each scan stops at the first line whose
/// black-pixel fraction falls below black_row_fraction.
std::pair<RgbImage, CropRect> remove_black_frame(const RgbImage& img,
                                                 const FrameParams& params = {});

RgbImage crop(const RgbImage& img, const CropRect& rect);

}  // namespace locus
