#include "locus/localize.hpp"

#include <algorithm>
#include <cmath>

namespace locus {

ExpansionSpec ExpansionSpec::parse(const std::string& text) {
  if (text == "none" || text.empty()) return none();
  const auto colon = text.find(':');
  const std::string mode = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (mode == "nonadaptive") {
      const double p = std::stod(arg);
      if (p <= 0.0 || p > 50.0) throw ParseError("expansion percent must be in (0,50]");
      return non_adaptive(p);
    }
    if (mode == "adaptive") {
      const int g = std::stoi(arg);
      if (g < 1 || g > 64) throw ParseError("expansion gray levels must be in [1,64]");
      return adaptive(g);
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("bad expansion argument: " + text);
  }
  throw ParseError("unknown expansion mode: " + text);
}

std::string ExpansionSpec::label() const {
  switch (mode) {
    case Mode::None: return "none";
    case Mode::NonAdaptive: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "nonadaptive:%g", percent);
      return buf;
    }
    case Mode::Adaptive: return "adaptive:" + std::to_string(gray);
  }
  return "?";
}

BoundingBox bounding_box(const BinaryMask& mask, const ComponentPolicy& policy) {
  if (policy.kind == ComponentPolicy::Kind::AllForeground) {
    BoundingBox box{mask.cols(), mask.rows(), -1, -1};
    for (Index y = 0; y < mask.rows(); ++y) {
      for (Index x = 0; x < mask.cols(); ++x) {
        if (!mask(y, x)) continue;
        box.left = std::min(box.left, x);
        box.right = std::max(box.right, x);
        box.top = std::min(box.top, y);
        box.bottom = std::max(box.bottom, y);
      }
    }
    if (box.right < 0) throw EmptyMask();
    return box;
  }

  const auto components = connected_components(mask, policy.connectivity);
  if (components.empty()) throw EmptyMask();
  BoundingBox box = components.front().box;
  if (policy.kind == ComponentPolicy::Kind::ComponentsAboveFraction) {
    const double cutoff = policy.fraction * static_cast<double>(components.front().area);
    for (std::size_t i = 1; i < components.size(); ++i) {
      if (static_cast<double>(components[i].area) < cutoff) break;  // sorted by area
      box.left = std::min(box.left, components[i].box.left);
      box.right = std::max(box.right, components[i].box.right);
      box.top = std::min(box.top, components[i].box.top);
      box.bottom = std::max(box.bottom, components[i].box.bottom);
    }
  }
  return box;
}

namespace {

// Round-half-up on a non-negative amount.
Index expansion_pixels(Index extent, double percent) {
  return static_cast<Index>(std::floor(extent * percent / 100.0 + 0.5));
}

}  // namespace

BoundingBox expand_nonadaptive(const BoundingBox& box, double percent, Index img_width,
                               Index img_height) {
  const Index dx = expansion_pixels(box.width(), percent);
  const Index dy = expansion_pixels(box.height(), percent);
  return {std::max<Index>(0, box.left - dx), std::max<Index>(0, box.top - dy),
          std::min(img_width - 1, box.right + dx), std::min(img_height - 1, box.bottom + dy)};
}

BoundingBox expand_adaptive(const GrayImage& x, const std::vector<ThresholdResult>& thresholds,
                            const FusionParams& params, int gray_levels,
                            const ComponentPolicy& policy) {
  std::vector<ThresholdResult> raised = thresholds;
  for (auto& r : raised) r.t = std::min(r.t + gray_levels, 255);
  std::vector<BinaryMask> a;
  a.reserve(raised.size());
  for (const auto& r : raised) a.push_back(binarize(x, r.t));
  const WeightTables w = build_weight_tables(raised, params.gamma);
  BinaryMask mask = fuse_initial(x, a, w, params.window);
  if (params.k_max >= 1) mask = fuse_refine(mask, x, a, w, params);
  return bounding_box(mask, policy);
}

LocalizationResult localize(const RgbImage& img, const LocalizeConfig& config) {
  auto [cropped, rect] = remove_black_frame(img, config.frame);
  const GrayImage blue = extract_blue_channel(cropped);

  const FuseResult fused = fuse(blue, config.spec, config.fusion);

  LocalizationResult out{rect, fused.mask, {}, {}, fused.thresholds};
  BoundingBox box = bounding_box(fused.mask, config.policy);
  BoundingBox expanded = box;
  switch (config.expansion.mode) {
    case ExpansionSpec::Mode::None:
      break;
    case ExpansionSpec::Mode::NonAdaptive:
      expanded = expand_nonadaptive(box, config.expansion.percent, blue.cols(), blue.rows());
      break;
    case ExpansionSpec::Mode::Adaptive: {
      expanded = expand_adaptive(blue, fused.thresholds, config.fusion, config.expansion.gray,
                                 config.policy);
      // The raised-threshold mask is a superset of the original, so its box
      // must contain the initial box; guard the invariant anyway.
      expanded.left = std::min(expanded.left, box.left);
      expanded.top = std::min(expanded.top, box.top);
      expanded.right = std::max(expanded.right, box.right);
      expanded.bottom = std::max(expanded.bottom, box.bottom);
      break;
    }
  }

  // Report in the original image frame.
  auto shift = [&](BoundingBox b) {
    return BoundingBox{b.left + rect.left, b.top + rect.top, b.right + rect.left,
                       b.bottom + rect.top};
  };
  out.initial_box = shift(box);
  out.expanded_box = shift(expanded);
  return out;
}

}  // namespace locus
