#include "locus/image.hpp"

#include <algorithm>
#include <utility>

namespace locus {

GrayImage extract_blue_channel(const RgbImage& img) { return img.b; }

Histogram histogram(const GrayImage& img) {
  Histogram h;
  const std::uint8_t* data = img.data();
  const Index n = img.size();
  for (Index i = 0; i < n; ++i) ++h.bins[data[i]];
  h.total = n;
  return h;
}

BinaryMask binarize(const GrayImage& img, int threshold) {
  return (img.cast<int>() <= threshold).cast<std::uint8_t>();
}

std::vector<Component> connected_components(const BinaryMask& mask, int connectivity) {
  const Index h = mask.rows();
  const Index w = mask.cols();
  Plane<std::int32_t> labels = Plane<std::int32_t>::Constant(h, w, -1);

  std::vector<Component> out;
  std::vector<std::pair<Index, Index>> stack;
  std::vector<std::pair<Index, Index>> first_pixel;  // row-major discovery pixel per component

  int next_label = 0;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      if (mask(y, x) == 0 || labels(y, x) >= 0) continue;
      Component c;
      c.label = next_label++;
      c.box = {x, y, x, y};
      first_pixel.emplace_back(y, x);
      stack.clear();
      stack.emplace_back(y, x);
      labels(y, x) = c.label;
      while (!stack.empty()) {
        auto [py, px] = stack.back();
        stack.pop_back();
        ++c.area;
        c.box.left = std::min(c.box.left, px);
        c.box.right = std::max(c.box.right, px);
        c.box.top = std::min(c.box.top, py);
        c.box.bottom = std::max(c.box.bottom, py);
        for (Index dy = -1; dy <= 1; ++dy) {
          for (Index dx = -1; dx <= 1; ++dx) {
            if (dy == 0 && dx == 0) continue;
            if (connectivity == 4 && dy != 0 && dx != 0) continue;
            const Index ny = py + dy;
            const Index nx = px + dx;
            if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
            if (mask(ny, nx) == 0 || labels(ny, nx) >= 0) continue;
            labels(ny, nx) = c.label;
            stack.emplace_back(ny, nx);
          }
        }
      }
      out.push_back(c);
    }
  }

  std::sort(out.begin(), out.end(), [&](const Component& a, const Component& b) {
    if (a.area != b.area) return a.area > b.area;
    return first_pixel[a.label] < first_pixel[b.label];
  });
  return out;
}

}  // namespace locus
