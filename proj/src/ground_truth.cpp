#include "locus/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "locus/io.hpp"

namespace locus {

namespace {

// All points within 0.5 px of a single line => no enclosed area.
bool collinear(const std::vector<Eigen::Vector2d>& pts, double tol) {
  // Direction from the farthest pair through the first point.
  Eigen::Vector2d origin = pts.front();
  Eigen::Vector2d dir = Eigen::Vector2d::Zero();
  double best = 0.0;
  for (const auto& p : pts) {
    const double d = (p - origin).norm();
    if (d > best) {
      best = d;
      dir = (p - origin).normalized();
    }
  }
  if (best <= tol) return true;  // all points coincide
  for (const auto& p : pts) {
    const Eigen::Vector2d v = p - origin;
    const double perp = std::abs(v.x() * dir.y() - v.y() * dir.x());
    if (perp > tol) return false;
  }
  return true;
}

}  // namespace

std::vector<Eigen::Vector2d> sample_border_spline(const BorderAnnotation& ann,
                                                  int samples_per_segment) {
  const auto& p = ann.points;
  const std::size_t n = p.size();
  std::vector<Eigen::Vector2d> samples;
  samples.reserve(n * static_cast<std::size_t>(samples_per_segment));
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = p[i];
    const Eigen::Vector2d& b = p[(i + 1) % n];
    const Eigen::Vector2d& c = p[(i + 2) % n];
    for (int k = 0; k < samples_per_segment; ++k) {
      const double t = static_cast<double>(k) / samples_per_segment;
      // Quadratic uniform B-spline basis on one segment.
      const double w0 = 0.5 * (1.0 - t) * (1.0 - t);
      const double w1 = 0.5 * (-2.0 * t * t + 2.0 * t + 1.0);
      const double w2 = 0.5 * t * t;
      samples.push_back(w0 * a + w1 * b + w2 * c);
    }
  }
  return samples;
}

BinaryMask rasterize_border(const BorderAnnotation& ann, Index width, Index height,
                            int samples_per_segment) {
  if (ann.points.size() < 3) throw DegenerateCurve("need at least 3 control points");
  if (collinear(ann.points, 0.5)) throw DegenerateCurve();

  const auto poly = sample_border_spline(ann, samples_per_segment);
  BinaryMask mask = BinaryMask::Zero(height, width);

  // Even-odd scanline fill over pixel centers.
  std::vector<double> xs;
  for (Index y = 0; y < height; ++y) {
    xs.clear();
    const double yc = static_cast<double>(y);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Eigen::Vector2d& a = poly[i];
      const Eigen::Vector2d& b = poly[(i + 1) % poly.size()];
      if ((a.y() <= yc && yc < b.y()) || (b.y() <= yc && yc < a.y())) {
        const double t = (yc - a.y()) / (b.y() - a.y());
        xs.push_back(a.x() + t * (b.x() - a.x()));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      const Index x0 = std::max<Index>(0, static_cast<Index>(std::ceil(xs[i])));
      const Index x1 = std::min<Index>(width - 1, static_cast<Index>(std::floor(xs[i + 1])));
      for (Index x = x0; x <= x1; ++x) mask(y, x) = 1;
    }
  }

  // Boundary samples belong to the region as well.
  for (const auto& s : poly) {
    const Index x = static_cast<Index>(std::lround(s.x()));
    const Index y = static_cast<Index>(std::lround(s.y()));
    if (x >= 0 && x < width && y >= 0 && y < height) mask(y, x) = 1;
  }
  return mask;
}

GroundTruth ground_truth_from_mask(BinaryMask mask) {
  GroundTruth gt;
  gt.manual_box = bounding_box(mask, ComponentPolicy::all());
  gt.manual_border = std::move(mask);
  return gt;
}

GroundTruth load_ground_truth(const std::string& path, Index width, Index height) {
  const bool is_png = path.size() >= 4 && path.substr(path.size() - 4) == ".png";
  if (is_png) {
    BinaryMask mask = read_mask_png(path);
    if (mask.rows() != height || mask.cols() != width)
      throw ParseError("ground-truth mask dimensions do not match the image: " + path);
    return ground_truth_from_mask(std::move(mask));
  }

  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  BorderAnnotation ann;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) throw ParseError("bad point line in " + path + ": " + line);
    if (x < 0 || x >= static_cast<double>(width) || y < 0 || y >= static_cast<double>(height))
      throw ParseError("point outside image bounds in " + path);
    ann.points.emplace_back(x, y);
  }
  if (ann.points.empty()) throw ParseError("empty ground-truth file: " + path);
  if (ann.points.size() < 3) throw ParseError("need at least 3 border points: " + path);
  return ground_truth_from_mask(rasterize_border(ann, width, height));
}

}  // namespace locus
