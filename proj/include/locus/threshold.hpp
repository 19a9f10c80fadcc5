#pragma once

#include <string>
#include <vector>

#include "locus/image.hpp"

namespace locus {

/// The six histogram-thresholding criteria, in the canonical ensemble order.
enum class ThresholdMethod { Otsu, Kapur, HuangWang, Yen, Sahoo, LiTam };

inline constexpr int kMethodCount = 6;

std::string method_name(ThresholdMethod m);
ThresholdMethod parse_method(const std::string& name);  // throws ParseError

struct ThresholdResult {
  ThresholdMethod method;
  int t = 0;  // classes C0 = [0..t], C1 = [t+1..255]
  bool operator==(const ThresholdResult&) const = default;
};

// Each method returns the smallest gray level attaining its optimal criterion
// value. All require >= 2 populated bins and throw DegenerateHistogram
// otherwise. Candidate thresholds are restricted to splits where both classes
// carry probability mass.

/// Maximize between-class variance w0*w1*(mu0-mu1)^2.
ThresholdResult otsu(const Histogram& h);

/// Maximize the sum of Shannon entropies of the renormalized classes.
ThresholdResult kapur(const Histogram& h);

/// Minimize fuzzy Shannon entropy with membership 1/(1+|g-mu_class|/C),
/// C = populated gray range.
ThresholdResult huang_wang(const Histogram& h);

/// Maximize the sum of order-2 Renyi entropies of the two classes
/// (maximum correlation criterion).
ThresholdResult yen(const Histogram& h);

/// Renyi-entropy thresholds at orders 1/2, 1 and 2, combined with the
/// rank/spacing-based weighting rule.
ThresholdResult sahoo(const Histogram& h);

/// Minimum cross entropy via the iterative fixed-point update on class means,
/// polished to the nearest local optimum of the cross-entropy objective.
ThresholdResult li_tam(const Histogram& h);

ThresholdResult apply_method(ThresholdMethod m, const Histogram& h);

/// Cross-entropy objective used by li_tam (exposed for its local-optimality
/// contract): eta(t) = -(A0*ln mu0 + A1*ln mu1), A_c = sum of g*h(g) over the
/// class, with 0*ln 0 = 0.
double cross_entropy(const Histogram& h, int t);

/// An ordered, duplicate-free subset of the six methods.
class EnsembleSpec {
 public:
  explicit EnsembleSpec(std::vector<ThresholdMethod> methods);

  /// Parses "Otsu-Kapur-Huang-Sahoo" or "otsu,kapur" (case-insensitive).
  static EnsembleSpec parse(const std::string& text);

  const std::vector<ThresholdMethod>& methods() const { return methods_; }
  std::size_t size() const { return methods_.size(); }

  /// Canonical name: short method names joined with "-" in stored order.
  std::string name() const;

 private:
  std::vector<ThresholdMethod> methods_;
};

/// One ThresholdResult per method, order preserved.
std::vector<ThresholdResult> compute_ensemble(const Histogram& h, const EnsembleSpec& spec);

}  // namespace locus
