#include "locus/frame.hpp"

#include <cmath>

namespace locus {

namespace {

// Fractions are compared by integer cross-multiplication at per-mille
// resolution; no float compares in the scan itself.
long long permille(double fraction) { return std::llround(fraction * 1000.0); }

}  // namespace

RgbImage crop(const RgbImage& img, const CropRect& rect) {
  RgbImage out;
  out.r = img.r.block(rect.top, rect.left, rect.height(), rect.width());
  out.g = img.g.block(rect.top, rect.left, rect.height(), rect.width());
  out.b = img.b.block(rect.top, rect.left, rect.height(), rect.width());
  return out;
}

std::pair<RgbImage, CropRect> remove_black_frame(const RgbImage& img, const FrameParams& params) {
  const Index h = img.height();
  const Index w = img.width();
  const long long frac_pm = permille(params.black_row_fraction);

  auto is_black = [&](Index y, Index x) {
    return lightness(img.r(y, x), img.g(y, x), img.b(y, x)) < params.black_lightness;
  };
  auto row_is_frame = [&](Index y) {
    long long black = 0;
    for (Index x = 0; x < w; ++x) black += is_black(y, x);
    return black * 1000 >= frac_pm * w;
  };
  auto col_is_frame = [&](Index x) {
    long long black = 0;
    for (Index y = 0; y < h; ++y) black += is_black(y, x);
    return black * 1000 >= frac_pm * h;
  };

  Index top = 0, bottom = 0, left = 0, right = 0;
  while (top < h && row_is_frame(top)) ++top;
  while (bottom < h && row_is_frame(h - 1 - bottom)) ++bottom;
  while (left < w && col_is_frame(left)) ++left;
  while (right < w && col_is_frame(w - 1 - right)) ++right;

  // Degenerate all-black input: the opposing scans meet.
  if (top + bottom >= h || left + right >= w) throw FrameConsumesImage();

  const Index row_cap = static_cast<Index>(std::floor(params.max_frame_fraction * h));
  const Index col_cap = static_cast<Index>(std::floor(params.max_frame_fraction * w));
  top = std::min(top, row_cap);
  bottom = std::min(bottom, row_cap);
  left = std::min(left, col_cap);
  right = std::min(right, col_cap);

  const CropRect rect{top, h - 1 - bottom, left, w - 1 - right};
  return {crop(img, rect), rect};
}

}  // namespace locus
