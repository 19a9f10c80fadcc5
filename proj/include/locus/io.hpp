#pragma once

#include <string>

#include "locus/image.hpp"

namespace locus {

/// Reads an 8-bit PNG (gray, gray+alpha, RGB or RGBA) or binary PPM (P6).
/// Gray sources are replicated into all three channels.
RgbImage read_image(const std::string& path);

/// Reads a single-channel mask PNG; any nonzero value counts as foreground.
BinaryMask read_mask_png(const std::string& path);

/// Writes a mask as single-channel PNG with values {0,255}.
void write_mask_png(const std::string& path, const BinaryMask& mask);

void write_rgb_png(const std::string& path, const RgbImage& img);

}  // namespace locus
