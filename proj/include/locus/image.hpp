#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <vector>

#include "locus/errors.hpp"

namespace locus {

using Index = Eigen::Index;

/// Dense row-major raster plane. Scalar is uint8 for all image data here,
/// but the alias keeps the door open for intermediate float planes.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Gray levels in 0..255. rows() = image height, cols() = image width.
using GrayImage = Plane<std::uint8_t>;

/// Labels in {0,1}; 1 = lesion / foreground.
using BinaryMask = Plane<std::uint8_t>;

/// 24-bit color image stored as three planes.
struct RgbImage {
  Plane<std::uint8_t> r, g, b;

  RgbImage() = default;
  RgbImage(Index height, Index width) : r(height, width), g(height, width), b(height, width) {}

  Index height() const { return r.rows(); }
  Index width() const { return r.cols(); }
};

/// Axis-aligned box with inclusive pixel indices.
struct BoundingBox {
  Index left = 0;
  Index top = 0;
  Index right = 0;
  Index bottom = 0;

  Index width() const { return right - left + 1; }
  Index height() const { return bottom - top + 1; }
  long long area() const { return static_cast<long long>(width()) * height(); }
  bool contains(const BoundingBox& inner) const {
    return left <= inner.left && top <= inner.top && right >= inner.right &&
           bottom >= inner.bottom;
  }
  bool operator==(const BoundingBox&) const = default;
};

/// 256-bin gray-level frequency table.
struct Histogram {
  std::array<std::int64_t, 256> bins{};
  std::int64_t total = 0;

  int populated_levels() const {
    int n = 0;
    for (auto c : bins) n += (c > 0);
    return n;
  }
};

/// HSL lightness, integer form: floor((max+min)/2).
inline int lightness(int r, int g, int b) {
  const int hi = std::max(r, std::max(g, b));
  const int lo = std::min(r, std::min(g, b));
  return (hi + lo) / 2;
}

GrayImage extract_blue_channel(const RgbImage& img);

Histogram histogram(const GrayImage& img);

/// Dark-object convention: label 1 where value <= threshold.
BinaryMask binarize(const GrayImage& img, int threshold);

struct Component {
  long long area = 0;
  BoundingBox box;
  int label = 0;  // discovery order, row-major
};

/// Components of the foreground, sorted by descending area; ties broken by
/// the row-major-first foreground pixel.
std::vector<Component> connected_components(const BinaryMask& mask, int connectivity = 8);

}  // namespace locus
