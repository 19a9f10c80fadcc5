#pragma once

#include <string>
#include <vector>

#include "locus/frame.hpp"
#include "locus/fusion.hpp"
#include "locus/image.hpp"
#include "locus/threshold.hpp"

namespace locus {

/// Which foreground pixels the box must enclose.
struct ComponentPolicy {
  enum class Kind { AllForeground, LargestComponent, ComponentsAboveFraction };
  Kind kind = Kind::ComponentsAboveFraction;
  double fraction = 0.05;  // relative to the largest component
  int connectivity = 8;

  static ComponentPolicy all() { return {Kind::AllForeground, 0.0, 8}; }
  static ComponentPolicy largest() { return {Kind::LargestComponent, 0.0, 8}; }
};

struct ExpansionSpec {
  enum class Mode { None, NonAdaptive, Adaptive };
  Mode mode = Mode::None;
  double percent = 0.0;  // non-adaptive P
  int gray = 0;          // adaptive G

  static ExpansionSpec none() { return {}; }
  static ExpansionSpec non_adaptive(double p) { return {Mode::NonAdaptive, p, 0}; }
  static ExpansionSpec adaptive(int g) { return {Mode::Adaptive, 0.0, g}; }

  /// "none", "nonadaptive:P" or "adaptive:G"; also used as the CLI syntax.
  static ExpansionSpec parse(const std::string& text);
  std::string label() const;
};

/// Minimal box around the foreground retained by the policy.
BoundingBox bounding_box(const BinaryMask& mask,
                         const ComponentPolicy& policy = ComponentPolicy{});

/// Grows the box by round(M_B*P/100) px West/East and round(N_B*P/100) px
/// North/South, clipped to the image.
BoundingBox expand_nonadaptive(const BoundingBox& box, double percent, Index img_width,
                               Index img_height);

/// Re-binarizes with thresholds raised by G gray levels, re-fuses, and
/// recomputes the box under the same policy.
BoundingBox expand_adaptive(const GrayImage& x, const std::vector<ThresholdResult>& thresholds,
                            const FusionParams& params, int gray_levels,
                            const ComponentPolicy& policy);

struct LocalizeConfig {
  FrameParams frame;
  EnsembleSpec spec;
  FusionParams fusion;
  ExpansionSpec expansion;
  ComponentPolicy policy;
};

/// Pipeline output; box coordinates are in the original image frame.
struct LocalizationResult {
  CropRect crop;
  BinaryMask fused;  // in cropped frame
  BoundingBox initial_box;
  BoundingBox expanded_box;
  std::vector<ThresholdResult> thresholds;
};

LocalizationResult localize(const RgbImage& img, const LocalizeConfig& config);

}  // namespace locus
