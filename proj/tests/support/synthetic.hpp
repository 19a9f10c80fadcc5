// Seeded synthetic inputs shared by the unit and acceptance suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "locus/image.hpp"

namespace synthetic {

using locus::BinaryMask;
using locus::BoundingBox;
using locus::GrayImage;
using locus::Histogram;
using locus::Index;
using locus::RgbImage;

inline Histogram from_counts(std::initializer_list<std::pair<int, std::int64_t>> counts) {
  Histogram h;
  for (auto [g, c] : counts) {
    h.bins[static_cast<std::size_t>(g)] += c;
    h.total += c;
  }
  return h;
}

// Randomized histogram corpus: bimodal, skewed, sparse and adjacent-level
// shapes, as drawn by `shape = index % 4`.
inline Histogram random_histogram(std::mt19937& rng, int shape) {
  Histogram h;
  auto add = [&](int g, std::int64_t c) {
    g = std::clamp(g, 0, 255);
    h.bins[static_cast<std::size_t>(g)] += c;
    h.total += c;
  };
  switch (shape & 3) {
    case 0: {  // bimodal clusters
      std::uniform_int_distribution<int> center1(20, 110), center2(140, 235), spread(2, 20);
      std::uniform_int_distribution<std::int64_t> mass(50, 5000);
      const int c1 = center1(rng), c2 = center2(rng);
      const int s1 = spread(rng), s2 = spread(rng);
      std::normal_distribution<double> n1(c1, s1), n2(c2, s2);
      const std::int64_t m1 = mass(rng), m2 = mass(rng);
      for (std::int64_t i = 0; i < m1; ++i) add(static_cast<int>(std::lround(n1(rng))), 1);
      for (std::int64_t i = 0; i < m2; ++i) add(static_cast<int>(std::lround(n2(rng))), 1);
      break;
    }
    case 1: {  // heavily skewed
      std::exponential_distribution<double> e(0.05);
      std::uniform_int_distribution<int> offset(0, 100);
      const int off = offset(rng);
      for (int i = 0; i < 3000; ++i) add(off + static_cast<int>(e(rng)), 1);
      break;
    }
    case 2: {  // sparse: a handful of spikes
      std::uniform_int_distribution<int> level(0, 255), nspikes(2, 8);
      std::uniform_int_distribution<std::int64_t> mass(1, 1000);
      const int n = nspikes(rng);
      for (int i = 0; i < n; ++i) add(level(rng), mass(rng));
      break;
    }
    default: {  // adjacent levels
      std::uniform_int_distribution<int> base(0, 253), width(1, 3);
      std::uniform_int_distribution<std::int64_t> mass(1, 500);
      const int b = base(rng);
      const int w = width(rng);
      for (int g = b; g <= b + w; ++g) add(g, mass(rng));
      break;
    }
  }
  if (h.populated_levels() < 2) {  // patch up rare degenerate draws
    add(10, 5);
    add(200, 5);
  }
  return h;
}

inline BinaryMask random_mask(std::mt19937& rng, Index height, Index width, double p = 0.5) {
  std::bernoulli_distribution d(p);
  BinaryMask m(height, width);
  for (Index y = 0; y < height; ++y)
    for (Index x = 0; x < width; ++x) m(y, x) = d(rng) ? 1 : 0;
  return m;
}

inline GrayImage random_gray(std::mt19937& rng, Index height, Index width) {
  std::uniform_int_distribution<int> d(0, 255);
  GrayImage g(height, width);
  for (Index y = 0; y < height; ++y)
    for (Index x = 0; x < width; ++x) g(y, x) = static_cast<std::uint8_t>(d(rng));
  return g;
}

/// One synthetic dermoscopy-like image: rotated dark ellipse with an inner
/// intensity penumbra, additive Gaussian noise, and a black frame.
struct EllipseScene {
  RgbImage image;
  BoundingBox truth_box;       // analytic box of the ellipse, original frame
  double border_area = 0.0;    // analytic lesion area, pi*a*b
  int frame_px = 0;
};

struct EllipseSceneParams {
  Index width = 768;
  Index height = 512;
  int frame_px = 15;
  int frame_value = 5;
  int core_value = 60;
  int background_value = 180;
  double noise_sigma = 8.0;
  // Transition width as a fraction of the normalized radius. Wide enough
  // that the thresholded region under-covers the analytic ellipse by more
  // than a small percentage expansion adds back.
  double penumbra = 0.12;
};

inline EllipseScene make_ellipse_scene(std::mt19937& rng, const EllipseSceneParams& p = {}) {
  std::uniform_real_distribution<double> cx_d(p.width / 2.0 - 30, p.width / 2.0 + 30);
  std::uniform_real_distribution<double> cy_d(p.height / 2.0 - 20, p.height / 2.0 + 20);
  std::uniform_real_distribution<double> a_d(120, 200), b_d(80, 140), th_d(0.0, 3.14159);
  const double cx = cx_d(rng), cy = cy_d(rng);
  const double a = a_d(rng), b = b_d(rng), theta = th_d(rng);
  const double ct = std::cos(theta), st = std::sin(theta);

  std::normal_distribution<double> noise(0.0, p.noise_sigma);
  auto clamp8 = [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  };

  EllipseScene scene;
  scene.frame_px = p.frame_px;
  scene.image = RgbImage(p.height, p.width);
  for (Index y = 0; y < p.height; ++y) {
    for (Index x = 0; x < p.width; ++x) {
      double value;
      const bool in_frame = x < p.frame_px || x >= p.width - p.frame_px || y < p.frame_px ||
                            y >= p.height - p.frame_px;
      if (in_frame) {
        value = p.frame_value;
      } else {
        const double dx = x - cx, dy = y - cy;
        const double u = (dx * ct + dy * st) / a;
        const double v = (-dx * st + dy * ct) / b;
        const double r = std::sqrt(u * u + v * v);
        if (r >= 1.0) {
          value = p.background_value;
        } else if (r <= 1.0 - p.penumbra) {
          value = p.core_value;
        } else {
          const double q = (r - (1.0 - p.penumbra)) / p.penumbra;
          value = p.core_value + (p.background_value - p.core_value) * q;
        }
      }
      const std::uint8_t g = clamp8(value + noise(rng));
      scene.image.r(y, x) = g;
      scene.image.g(y, x) = g;
      scene.image.b(y, x) = g;
    }
  }

  const double ex = std::sqrt(a * a * ct * ct + b * b * st * st);
  const double ey = std::sqrt(a * a * st * st + b * b * ct * ct);
  scene.truth_box = {static_cast<Index>(std::lround(cx - ex)),
                     static_cast<Index>(std::lround(cy - ey)),
                     static_cast<Index>(std::lround(cx + ex)),
                     static_cast<Index>(std::lround(cy + ey))};
  scene.border_area = 3.14159265358979 * a * b;
  return scene;
}

}  // namespace synthetic
