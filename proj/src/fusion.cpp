#include "locus/fusion.hpp"

#include <cmath>

namespace locus {

namespace {

void check_dims(const GrayImage& x, const std::vector<BinaryMask>& a, std::size_t p) {
  if (a.size() != p) throw DimensionMismatch("mask count does not match weight tables");
  for (const auto& m : a)
    if (m.rows() != x.rows() || m.cols() != x.cols())
      throw DimensionMismatch("mask dimensions differ from image");
}

// Adds the weighted inter-image energy terms for labels 0 and 1 at (y0, x0)
// into e0/e1, in method order. The inter-image term compares the candidate
// label against each method's decision at the pixel itself; making it a
// window sum would break the unanimity fixpoint and the single-voter
// reduction, which are part of the contract. Accumulation order is part of
// the determinism contract.
inline void add_inter_image_energy(const GrayImage& x, const std::vector<BinaryMask>& a,
                                   const WeightTables& w, Index y0, Index x0, double& e0,
                                   double& e1) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = w.beta(static_cast<Index>(i)) * w.alpha(x(y0, x0), static_cast<Index>(i));
    if (a[i](y0, x0)) {
      e1 -= v;
    } else {
      e0 -= v;
    }
  }
}

}  // namespace

WeightTables build_weight_tables(const std::vector<ThresholdResult>& thresholds, double gamma) {
  const Index p = static_cast<Index>(thresholds.size());
  WeightTables w;
  long long sum = 0;
  for (const auto& r : thresholds) sum += r.t;
  w.t_bar = static_cast<double>(sum) / static_cast<double>(p);

  w.alpha.resize(256, p);
  w.beta.resize(p);
  for (Index i = 0; i < p; ++i) {
    const int t = thresholds[static_cast<std::size_t>(i)].t;
    for (int v = 0; v < 256; ++v)
      w.alpha(v, i) = 1.0 - std::exp(-gamma * std::abs(v - t));
    w.beta(i) = std::exp(-gamma * std::abs(w.t_bar - t));
  }
  return w;
}

BinaryMask fuse_initial(const GrayImage& x, const std::vector<BinaryMask>& a,
                        const WeightTables& w, int window) {
  check_dims(x, a, static_cast<std::size_t>(w.alpha.cols()));
  (void)window;  // the window only enters through the spatial term in fuse_refine
  BinaryMask y(x.rows(), x.cols());
  for (Index y0 = 0; y0 < x.rows(); ++y0) {
    for (Index x0 = 0; x0 < x.cols(); ++x0) {
      double e0 = 0.0, e1 = 0.0;
      add_inter_image_energy(x, a, w, y0, x0, e0, e1);
      // Tie goes to background.
      y(y0, x0) = e1 < e0 ? 1 : 0;
    }
  }
  return y;
}

BinaryMask fuse_refine(const BinaryMask& y, const GrayImage& x, const std::vector<BinaryMask>& a,
                       const WeightTables& w, const FusionParams& params) {
  check_dims(x, a, static_cast<std::size_t>(w.alpha.cols()));
  if (y.rows() != x.rows() || y.cols() != x.cols())
    throw DimensionMismatch("label image dimensions differ from input");

  const int half = params.window / 2;
  BinaryMask prev = y;
  for (int sweep = 0; sweep < params.k_max; ++sweep) {
    BinaryMask next(x.rows(), x.cols());
    long long changed = 0;
    for (Index y0 = 0; y0 < x.rows(); ++y0) {
      for (Index x0 = 0; x0 < x.cols(); ++x0) {
        // Spatial agreement with the previous sweep's labels.
        double n0 = 0.0, n1 = 0.0;
        for (Index py = std::max<Index>(0, y0 - half); py <= std::min(x.rows() - 1, y0 + half);
             ++py) {
          for (Index px = std::max<Index>(0, x0 - half); px <= std::min(x.cols() - 1, x0 + half);
               ++px) {
            if (prev(py, px)) {
              n1 += 1.0;
            } else {
              n0 += 1.0;
            }
          }
        }
        // Energy accumulated in equation order: spatial term first, then the
        // weighted inter-image terms per method.
        double e0 = params.beta_sp * -n0;
        double e1 = params.beta_sp * -n1;
        add_inter_image_energy(x, a, w, y0, x0, e0, e1);
        const std::uint8_t label = e1 < e0 ? 1 : 0;
        next(y0, x0) = label;
        changed += (label != prev(y0, x0));
      }
    }
    prev = std::move(next);
    if (static_cast<double>(changed) < params.stop_fraction * static_cast<double>(x.size()))
      break;
  }
  return prev;
}

FuseResult fuse(const GrayImage& x, const EnsembleSpec& spec, const FusionParams& params) {
  const Histogram h = histogram(x);
  FuseResult out;
  out.thresholds = compute_ensemble(h, spec);
  std::vector<BinaryMask> a;
  a.reserve(out.thresholds.size());
  for (const auto& r : out.thresholds) a.push_back(binarize(x, r.t));
  out.weights = build_weight_tables(out.thresholds, params.gamma);
  out.mask = fuse_initial(x, a, out.weights, params.window);
  if (params.k_max >= 1) out.mask = fuse_refine(out.mask, x, a, out.weights, params);
  return out;
}

}  // namespace locus
