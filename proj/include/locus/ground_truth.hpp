#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "locus/image.hpp"
#include "locus/localize.hpp"

namespace locus {

/// Ordered control points clicked on the lesion border; the curve is closed.
struct BorderAnnotation {
  std::vector<Eigen::Vector2d> points;  // (x, y) pixel coordinates
};

struct GroundTruth {
  BinaryMask manual_border;  // filled lesion region
  BoundingBox manual_box;
};

/// Closed uniform quadratic B-spline through the control points (periodic
/// knots, approximating), densely sampled and scanline-filled. The mask is
/// interior plus boundary samples.
BinaryMask rasterize_border(const BorderAnnotation& ann, Index width, Index height,
                            int samples_per_segment = 32);

/// Samples the closed spline as a polygon (exposed for the rasterization
/// oracle in the tests).
std::vector<Eigen::Vector2d> sample_border_spline(const BorderAnnotation& ann,
                                                  int samples_per_segment = 32);

/// Loads either a mask PNG ({0,255}) or a CSV of "x,y" points (rasterized).
GroundTruth load_ground_truth(const std::string& path, Index width, Index height);

GroundTruth ground_truth_from_mask(BinaryMask mask);

}  // namespace locus
