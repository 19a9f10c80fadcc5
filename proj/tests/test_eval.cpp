#include "doctest.h"

#include <random>
#include <set>

#include "locus/eval.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace locus;

TEST_CASE("identical boxes have zero error") {
  const BoundingBox b{10, 10, 59, 39};
  CHECK(hance_error(b, b) == 0.0);
}

TEST_CASE("disjoint equal boxes have 200 percent error") {
  const BoundingBox a{0, 0, 9, 9};
  const BoundingBox b{100, 100, 109, 109};
  CHECK(hance_error(a, b) == doctest::Approx(200.0));
}

TEST_CASE("nested box, worked example") {
  // auto 50x50 inside manual 100x100: XOR = 10000 - 2500 = 7500 -> 75%.
  const BoundingBox manual{0, 0, 99, 99};
  const BoundingBox inner{25, 25, 74, 74};
  CHECK(hance_error(inner, manual) == doctest::Approx(75.0));
}

TEST_CASE("analytic error equals the raster XOR oracle") {
  std::mt19937 rng(113);
  std::uniform_int_distribution<Index> pos(0, 119), len(0, 79);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox a{pos(rng), pos(rng), 0, 0};
    const BoundingBox b{pos(rng), pos(rng), 0, 0};
    const BoundingBox A{a.left, a.top, a.left + len(rng), a.top + len(rng)};
    const BoundingBox B{b.left, b.top, b.left + len(rng), b.top + len(rng)};
    const double expected =
        100.0 * static_cast<double>(oracle::raster_xor_area(A, B, 220, 220)) /
        static_cast<double>(B.area());
    CHECK(hance_error(A, B) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("error is symmetric in the disagreement but normalized by the manual box") {
  const BoundingBox a{0, 0, 19, 19};   // area 400
  const BoundingBox b{10, 0, 29, 19};  // area 400, overlap 200
  CHECK(hance_error(a, b) == doctest::Approx(hance_error(b, a)));
  const BoundingBox small{0, 0, 9, 19};  // area 200 inside a
  // XOR(a, small) = 200; vs manual=a: 200/400, vs manual=small: 200/200.
  CHECK(hance_error(small, a) == doctest::Approx(50.0));
  CHECK(hance_error(a, small) == doctest::Approx(100.0));
}

TEST_CASE("size stat worked examples") {
  // Box covering the whole image -> 100.
  CHECK(size_stat(BoundingBox{0, 0, 99, 99}, 100, 100) == doctest::Approx(100.0));
  // Box a quarter of the image -> 400.
  CHECK(size_stat(BoundingBox{0, 0, 49, 49}, 100, 100) == doctest::Approx(400.0));
  // 30x25 box in a 100x20... use 100x100: 10000/750*100 = 1333.33.
  CHECK(size_stat(BoundingBox{0, 0, 29, 24}, 100, 100) ==
        doctest::Approx(10000.0 / 750.0 * 100.0));
}

TEST_CASE("ensemble enumeration counts") {
  CHECK(enumerate_ensembles({1, 2, 3, 4, 5, 6}).size() == 63u);
  CHECK(enumerate_ensembles({4, 5, 6}).size() == 15u + 6u + 1u);
  CHECK(enumerate_ensembles({1}).size() == 6u);
  CHECK(enumerate_ensembles({2}).size() == 15u);
  CHECK(enumerate_ensembles({3}).size() == 20u);
  CHECK(enumerate_ensembles({4}).size() == 15u);
  CHECK(enumerate_ensembles({5}).size() == 6u);
  CHECK(enumerate_ensembles({6}).size() == 1u);
}

TEST_CASE("ensemble enumeration is lexicographic in canonical order") {
  const auto pairs = enumerate_ensembles({2});
  CHECK(pairs.front().name() == "Otsu-Kapur");
  CHECK(pairs[1].name() == "Otsu-Huang");
  CHECK(pairs.back().name() == "Sahoo-Li");
  const auto full = enumerate_ensembles({6});
  CHECK(full.front().name() == "Otsu-Kapur-Huang-Yen-Sahoo-Li");
  // No duplicates anywhere.
  const auto all = enumerate_ensembles({1, 2, 3, 4, 5, 6});
  std::set<std::string> names;
  for (const auto& e : all) names.insert(e.name());
  CHECK(names.size() == all.size());
}

TEST_CASE("line fit recovers y = 2x + 1 exactly") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {0.0, 1.0, 2.0, 5.0, 9.0}) pts.emplace_back(x, 2.0 * x + 1.0);
  const LineModel m = fit_line(pts);
  CHECK(m.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.intercept == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("line fit through two points is the secant") {
  const LineModel m = fit_line({{1.0, 3.0}, {4.0, 9.0}});
  CHECK(m.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.intercept == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("line fit matches direct normal equations on noisy data") {
  std::mt19937 rng(127);
  std::normal_distribution<double> noise(0.0, 3.0);
  std::uniform_real_distribution<double> xs(10.0, 5000.0);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 50; ++i) {
    const double x = xs(rng);
    pts.emplace_back(x, 0.7 * x + 42.0 + noise(rng));
  }
  const LineModel m = fit_line(pts);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  CHECK(m.slope == doctest::Approx(slope).epsilon(1e-9));
  CHECK(m.intercept == doctest::Approx(intercept).epsilon(1e-9));

  // Least-squares residuals are orthogonal to the regressor and sum to ~0.
  double rsum = 0.0, rx = 0.0;
  for (auto [x, y] : pts) {
    const double r = y - (m.slope * x + m.intercept);
    rsum += r;
    rx += r * x;
  }
  CHECK(std::abs(rsum) < 1e-6 * sy);
  CHECK(std::abs(rx) < 1e-6 * sxy);
}

TEST_CASE("degenerate fits are rejected") {
  CHECK_THROWS_AS(fit_line({}), DegenerateFit);
  CHECK_THROWS_AS(fit_line({{3.0, 1.0}}), DegenerateFit);
  CHECK_THROWS_AS(fit_line({{3.0, 1.0}, {3.0, 5.0}, {3.0, 9.0}}), DegenerateFit);
}

TEST_CASE("area estimate errors on a perfect model are zero") {
  const LineModel m{2.0, 1.0};
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 2.0, 3.0}) pts.emplace_back(x, 2.0 * x + 1.0);
  const PctErrorStats s = area_estimate_errors(m, pts);
  CHECK(s.mean_pct == doctest::Approx(0.0));
  CHECK(s.std_pct == doctest::Approx(0.0));
}

TEST_CASE("area estimate errors, worked example") {
  // model y = x; data (10, 8) and (10, 16): errors |10-8|/8 = 25% and
  // |10-16|/16 = 37.5% -> mean 31.25, population sigma 6.25.
  const PctErrorStats s = area_estimate_errors(LineModel{1.0, 0.0}, {{10, 8}, {10, 16}});
  CHECK(s.mean_pct == doctest::Approx(31.25));
  CHECK(s.std_pct == doctest::Approx(6.25));
}

TEST_CASE("mean and population sigma") {
  const auto [mu, sigma] = mean_and_sigma({4.0, 6.0});
  CHECK(mu == doctest::Approx(5.0));
  CHECK(sigma == doctest::Approx(1.0));
  const auto [mu1, sigma1] = mean_and_sigma({3.5});
  CHECK(mu1 == doctest::Approx(3.5));
  CHECK(sigma1 == doctest::Approx(0.0));
}

namespace {

std::vector<DatasetImage> tiny_dataset(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<DatasetImage> out;
  synthetic::EllipseSceneParams p;
  p.width = 256;
  p.height = 192;
  p.frame_px = 8;
  for (int i = 0; i < n; ++i) {
    auto scene = synthetic::make_ellipse_scene(rng, p);
    DatasetImage d;
    d.id = "img" + std::to_string(i);
    d.image = std::move(scene.image);
    // Ground truth: the analytic ellipse rasterized from a ring of points.
    BorderAnnotation ann;
    const double cx = (scene.truth_box.left + scene.truth_box.right) / 2.0;
    const double cy = (scene.truth_box.top + scene.truth_box.bottom) / 2.0;
    const double rx = scene.truth_box.width() / 2.0;
    const double ry = scene.truth_box.height() / 2.0;
    for (int k = 0; k < 16; ++k) {
      const double t = 2.0 * 3.14159265358979 * k / 16;
      ann.points.emplace_back(cx + rx * std::cos(t), cy + ry * std::sin(t));
    }
    d.truth = ground_truth_from_mask(
        rasterize_border(ann, d.image.width(), d.image.height()));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

TEST_CASE("sweep produces one row per configuration and one record per cell") {
  const auto dataset = tiny_dataset(3, 131);
  const auto ensembles = std::vector<EnsembleSpec>{EnsembleSpec::parse("otsu"),
                                                   EnsembleSpec::parse("otsu-kapur")};
  const std::vector<ExpansionSpec> expansions{ExpansionSpec::none(),
                                              ExpansionSpec::non_adaptive(2.0)};
  const SweepResult result = sweep(dataset, ensembles, expansions);
  CHECK(result.rows.size() == 4u);
  CHECK(result.records.size() == 12u);
  CHECK(result.failed_images.empty());

  // Rows are sorted by expanded error.
  for (std::size_t i = 1; i < result.rows.size(); ++i)
    CHECK(result.rows[i - 1].mu_ex <= result.rows[i].mu_ex);

  // Aggregates recompute from the records.
  for (const auto& row : result.rows) {
    std::vector<double> ex;
    for (const auto& rec : result.records)
      if (rec.ensemble == row.ensemble && rec.expansion == row.expansion)
        ex.push_back(rec.epsilon_expanded);
    CHECK(ex.size() == 3u);
    const auto [mu, sigma] = mean_and_sigma(ex);
    CHECK(row.mu_ex == doctest::Approx(mu));
    CHECK(row.sigma_ex == doctest::Approx(sigma));
  }

  // "none" cells must report identical initial and expanded errors.
  for (const auto& rec : result.records)
    if (rec.expansion == "none") CHECK(rec.epsilon_initial == rec.epsilon_expanded);
}

TEST_CASE("sweep is identical with one or several worker threads") {
  const auto dataset = tiny_dataset(2, 137);
  const auto ensembles = enumerate_ensembles({1});
  const std::vector<ExpansionSpec> expansions{ExpansionSpec::non_adaptive(4.0)};
  const SweepResult a = sweep(dataset, ensembles, expansions, {}, {}, {}, 1);
  const SweepResult b = sweep(dataset, ensembles, expansions, {}, {}, {}, 4);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].ensemble == b.rows[i].ensemble);
    CHECK(a.rows[i].mu_ex == b.rows[i].mu_ex);
    CHECK(a.rows[i].sigma_ei == b.rows[i].sigma_ei);
  }
}

TEST_CASE("a degenerate image is counted as a failure, not a crash") {
  auto dataset = tiny_dataset(2, 139);
  DatasetImage flat;
  flat.id = "flat";
  flat.image = RgbImage(64, 64);
  flat.image.r.setConstant(90);
  flat.image.g.setConstant(90);
  flat.image.b.setConstant(90);
  BinaryMask m = BinaryMask::Zero(64, 64);
  m.block(20, 20, 10, 10).setConstant(1);
  flat.truth = ground_truth_from_mask(std::move(m));
  dataset.push_back(std::move(flat));

  const std::vector<EnsembleSpec> ensembles{EnsembleSpec::parse("otsu")};
  const std::vector<ExpansionSpec> expansions{ExpansionSpec::none()};
  const SweepResult result = sweep(dataset, ensembles, expansions);
  CHECK(result.rows.size() == 1u);
  CHECK(result.rows[0].failures == 1);
  CHECK(result.records.size() == 2u);
  REQUIRE(result.failed_images.size() == 1u);
  CHECK(result.failed_images[0].find("flat") != std::string::npos);
}
