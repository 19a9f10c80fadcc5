#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "locus/ground_truth.hpp"
#include "locus/localize.hpp"

namespace locus {

/// XOR-area disagreement of the filled boxes, normalized by the manual box
/// area, in percent. Computed analytically from the box coordinates.
double hance_error(const BoundingBox& auto_box, const BoundingBox& manual_box);

/// How many times smaller than the image the box is, in percent
/// (M*N / box area * 100).
double size_stat(const BoundingBox& auto_box, Index img_width, Index img_height);

/// All method combinations at the given sizes, lexicographic in the canonical
/// method order.
std::vector<EnsembleSpec> enumerate_ensembles(const std::set<int>& sizes);

struct LineModel {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least-squares line through (x, y) pairs.
LineModel fit_line(const std::vector<std::pair<double, double>>& pairs);

struct PctErrorStats {
  double mean_pct = 0.0;
  double std_pct = 0.0;  // population standard deviation
};

/// Per-pair |model(x) - y| / y * 100, aggregated.
PctErrorStats area_estimate_errors(const LineModel& model,
                                   const std::vector<std::pair<double, double>>& pairs);

/// Per-image evaluation row.
struct EvalRecord {
  std::string image_id;
  std::string ensemble;
  std::string expansion;
  double epsilon_initial = 0.0;
  double epsilon_expanded = 0.0;
  double size_reduction = 0.0;
  long long area_automatic_box = 0;
  long long area_manual_box = 0;
  long long area_manual_border = 0;
  long long area_fusion_output = 0;
};

struct SweepRow {
  std::string ensemble;
  std::string expansion;
  double mu_ei = 0.0, sigma_ei = 0.0;
  double mu_ex = 0.0, sigma_ex = 0.0;
  double mu_s = 0.0, sigma_s = 0.0;
  int failures = 0;
};

/// One preloaded dataset image with its ground truth (original frame).
struct DatasetImage {
  std::string id;
  RgbImage image;
  GroundTruth truth;
};

struct SweepResult {
  std::vector<SweepRow> rows;           // sorted by mu_ex ascending
  std::vector<EvalRecord> records;      // per image x configuration
  std::vector<std::string> failed_images;  // id: error, per failed cell
};

/// Full parameter sweep: every (ensemble, expansion) cell aggregated over the
/// dataset with mean and population standard deviation. Failed images are
/// excluded from a cell and counted.
SweepResult sweep(const std::vector<DatasetImage>& dataset,
                  const std::vector<EnsembleSpec>& ensembles,
                  const std::vector<ExpansionSpec>& expansions,
                  const FrameParams& frame = {}, const FusionParams& fusion = {},
                  const ComponentPolicy& policy = {}, int jobs = 1);

/// Kahan-compensated mean and population sigma.
std::pair<double, double> mean_and_sigma(const std::vector<double>& values);

}  // namespace locus
