#include "locus/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace locus {

namespace {

long long overlap(Index a_lo, Index a_hi, Index b_lo, Index b_hi) {
  const Index lo = std::max(a_lo, b_lo);
  const Index hi = std::min(a_hi, b_hi);
  return hi >= lo ? static_cast<long long>(hi - lo + 1) : 0;
}

double kahan_sum(const std::vector<double>& values) {
  double sum = 0.0, c = 0.0;
  for (double v : values) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

double hance_error(const BoundingBox& auto_box, const BoundingBox& manual_box) {
  const long long a = auto_box.area();
  const long long m = manual_box.area();
  const long long inter = overlap(auto_box.left, auto_box.right, manual_box.left, manual_box.right) *
                          overlap(auto_box.top, auto_box.bottom, manual_box.top, manual_box.bottom);
  return static_cast<double>(a + m - 2 * inter) / static_cast<double>(m) * 100.0;
}

double size_stat(const BoundingBox& auto_box, Index img_width, Index img_height) {
  return static_cast<double>(img_width) * static_cast<double>(img_height) /
         static_cast<double>(auto_box.area()) * 100.0;
}

std::vector<EnsembleSpec> enumerate_ensembles(const std::set<int>& sizes) {
  static constexpr ThresholdMethod kOrder[kMethodCount] = {
      ThresholdMethod::Otsu, ThresholdMethod::Kapur, ThresholdMethod::HuangWang,
      ThresholdMethod::Yen, ThresholdMethod::Sahoo, ThresholdMethod::LiTam};
  std::vector<EnsembleSpec> out;
  for (int k : sizes) {
    if (k < 1 || k > kMethodCount) throw ParseError("ensemble size must be in 1..6");
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::vector<ThresholdMethod> methods;
      for (int i : idx) methods.push_back(kOrder[i]);
      out.emplace_back(std::move(methods));
      // next lexicographic combination
      int i = k - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == kMethodCount - k + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

LineModel fit_line(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) throw DegenerateFit("need at least 2 points");
  const double n = static_cast<double>(pairs.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pairs) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw DegenerateFit();
  LineModel m;
  m.slope = sxy / sxx;
  m.intercept = my - m.slope * mx;
  return m;
}

PctErrorStats area_estimate_errors(const LineModel& model,
                                   const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> errors;
  errors.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    const double estimate = model.slope * x + model.intercept;
    errors.push_back(std::abs(estimate - y) / y * 100.0);
  }
  const auto [mean, sigma] = mean_and_sigma(errors);
  return {mean, sigma};
}

std::pair<double, double> mean_and_sigma(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = kahan_sum(values) / n;
  std::vector<double> sq;
  sq.reserve(values.size());
  for (double v : values) sq.push_back((v - mean) * (v - mean));
  return {mean, std::sqrt(kahan_sum(sq) / n)};
}

namespace {

struct ImageContext {
  std::string id;
  bool ok = false;
  std::string error;
  CropRect rect;
  GrayImage blue;
  std::array<ThresholdResult, kMethodCount> thresholds{};
  std::array<BinaryMask, kMethodCount> masks;  // binarized per method
  BoundingBox manual_box;                      // original frame
  long long manual_border_area = 0;
};

ImageContext prepare_image(const DatasetImage& input, const FrameParams& frame) {
  ImageContext ctx;
  ctx.id = input.id;
  try {
    auto [cropped, rect] = remove_black_frame(input.image, frame);
    ctx.rect = rect;
    ctx.blue = extract_blue_channel(cropped);
    const Histogram h = histogram(ctx.blue);
    for (int i = 0; i < kMethodCount; ++i) {
      ctx.thresholds[static_cast<std::size_t>(i)] =
          apply_method(static_cast<ThresholdMethod>(i), h);
      ctx.masks[static_cast<std::size_t>(i)] =
          binarize(ctx.blue, ctx.thresholds[static_cast<std::size_t>(i)].t);
    }
    ctx.manual_box = input.truth.manual_box;
    ctx.manual_border_area = input.truth.manual_border.cast<long long>().sum();
    ctx.ok = true;
  } catch (const Error& e) {
    ctx.error = e.what();
  }
  return ctx;
}

}  // namespace

SweepResult sweep(const std::vector<DatasetImage>& dataset,
                  const std::vector<EnsembleSpec>& ensembles,
                  const std::vector<ExpansionSpec>& expansions, const FrameParams& frame,
                  const FusionParams& fusion, const ComponentPolicy& policy, int jobs) {
  // Prepare every image once; threshold computation dominates the shared work.
  std::vector<ImageContext> contexts(dataset.size());
  {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < dataset.size(); i = next.fetch_add(1))
        contexts[i] = prepare_image(dataset[i], frame);
    };
    if (jobs <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
  }

  SweepResult result;
  for (const auto& ctx : contexts)
    if (!ctx.ok) result.failed_images.push_back(ctx.id + ": " + ctx.error);

  for (const auto& spec : ensembles) {
    // Per-image fused output for this ensemble, reused across expansions.
    struct Fused {
      bool ok = false;
      BinaryMask mask;
      BoundingBox box;  // cropped frame
      long long fusion_area = 0;
      std::vector<ThresholdResult> thresholds;
    };
    std::vector<Fused> fused(contexts.size());
    for (std::size_t i = 0; i < contexts.size(); ++i) {
      const auto& ctx = contexts[i];
      if (!ctx.ok) continue;
      try {
        Fused f;
        std::vector<BinaryMask> a;
        for (ThresholdMethod m : spec.methods()) {
          f.thresholds.push_back(ctx.thresholds[static_cast<std::size_t>(m)]);
          a.push_back(ctx.masks[static_cast<std::size_t>(m)]);
        }
        const WeightTables w = build_weight_tables(f.thresholds, fusion.gamma);
        f.mask = fuse_initial(ctx.blue, a, w, fusion.window);
        if (fusion.k_max >= 1) f.mask = fuse_refine(f.mask, ctx.blue, a, w, fusion);
        f.box = bounding_box(f.mask, policy);
        f.fusion_area = f.mask.cast<long long>().sum();
        f.ok = true;
        fused[i] = std::move(f);
      } catch (const Error&) {
        // counted per cell below
      }
    }

    for (const auto& expansion : expansions) {
      std::vector<double> ei, ex, ss;
      int failures = 0;
      for (std::size_t i = 0; i < contexts.size(); ++i) {
        const auto& ctx = contexts[i];
        if (!ctx.ok || !fused[i].ok) {
          ++failures;
          continue;
        }
        try {
          BoundingBox expanded = fused[i].box;
          switch (expansion.mode) {
            case ExpansionSpec::Mode::None:
              break;
            case ExpansionSpec::Mode::NonAdaptive:
              expanded = expand_nonadaptive(fused[i].box, expansion.percent, ctx.blue.cols(),
                                            ctx.blue.rows());
              break;
            case ExpansionSpec::Mode::Adaptive:
              expanded = expand_adaptive(ctx.blue, fused[i].thresholds, fusion, expansion.gray,
                                         policy);
              break;
          }
          auto shift = [&](BoundingBox b) {
            return BoundingBox{b.left + ctx.rect.left, b.top + ctx.rect.top,
                               b.right + ctx.rect.left, b.bottom + ctx.rect.top};
          };
          const BoundingBox initial = shift(fused[i].box);
          const BoundingBox final_box = shift(expanded);

          EvalRecord rec;
          rec.image_id = ctx.id;
          rec.ensemble = spec.name();
          rec.expansion = expansion.label();
          rec.epsilon_initial = hance_error(initial, ctx.manual_box);
          rec.epsilon_expanded = hance_error(final_box, ctx.manual_box);
          rec.size_reduction =
              size_stat(final_box, dataset[i].image.width(), dataset[i].image.height());
          rec.area_automatic_box = final_box.area();
          rec.area_manual_box = ctx.manual_box.area();
          rec.area_manual_border = ctx.manual_border_area;
          rec.area_fusion_output = fused[i].fusion_area;
          ei.push_back(rec.epsilon_initial);
          ex.push_back(rec.epsilon_expanded);
          ss.push_back(rec.size_reduction);
          result.records.push_back(std::move(rec));
        } catch (const Error&) {
          ++failures;
        }
      }
      SweepRow row;
      row.ensemble = spec.name();
      row.expansion = expansion.label();
      std::tie(row.mu_ei, row.sigma_ei) = mean_and_sigma(ei);
      std::tie(row.mu_ex, row.sigma_ex) = mean_and_sigma(ex);
      std::tie(row.mu_s, row.sigma_s) = mean_and_sigma(ss);
      row.failures = failures;
      result.rows.push_back(std::move(row));
    }
  }

  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.mu_ex < b.mu_ex; });
  return result;
}

}  // namespace locus
