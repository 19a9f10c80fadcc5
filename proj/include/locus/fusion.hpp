#pragma once

#include <vector>

#include "locus/image.hpp"
#include "locus/threshold.hpp"

namespace locus {

struct FusionParams {
  double gamma = 0.1;        // decay rate of the reliability weights
  double beta_sp = 0.0;      // spatial weight; 0 = initialization-only scheme
  int k_max = 0;             // refinement sweeps; 0 = first-two-steps scheme
  int window = 3;            // odd-sided square neighborhood, center included
  double stop_fraction = 0.001;  // label-change fraction that halts refinement
};

/// Precomputed per-level and per-method reliability weights.
struct WeightTables {
  Eigen::ArrayXXd alpha;  // 256 x P, alpha(v, i) = 1 - exp(-gamma*|v - T_i|)
  Eigen::ArrayXd beta;    // P, beta(i) = exp(-gamma*|t_bar - T_i|)
  double t_bar = 0.0;     // mean ensemble threshold
};

WeightTables build_weight_tables(const std::vector<ThresholdResult>& thresholds, double gamma);

/// Per-pixel energy minimization without the spatial term: each method votes
/// with weight beta_i * alpha_i(x) for its own decision at the pixel. Ties go
/// to background.
BinaryMask fuse_initial(const GrayImage& x, const std::vector<BinaryMask>& a,
                        const WeightTables& w, int window = 3);

/// Up to k_max synchronous sweeps with the windowed spatial term enabled;
/// neighbor labels are read from the previous sweep (window clipped at
/// borders, center included). Stops early when the fraction of changed labels
/// drops below params.stop_fraction.
BinaryMask fuse_refine(const BinaryMask& y, const GrayImage& x, const std::vector<BinaryMask>& a,
                       const WeightTables& w, const FusionParams& params);

struct FuseResult {
  BinaryMask mask;
  std::vector<ThresholdResult> thresholds;
  WeightTables weights;
};

/// Full scheme: threshold each ensemble member, binarize, build weights,
/// initialize, and refine when k_max >= 1.
FuseResult fuse(const GrayImage& x, const EnsembleSpec& spec, const FusionParams& params = {});

}  // namespace locus
