#include "locus/io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

namespace locus {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path);
  return f;
}

// Decodes any 8-bit PNG into interleaved RGB rows via libpng transforms.
void read_png_rgb(const std::string& path, std::FILE* f, Index& height, Index& width,
                  std::vector<std::uint8_t>& interleaved) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode PNG " + path);
  }
  png_init_io(png, f);
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  width = static_cast<Index>(png_get_image_width(png, info));
  height = static_cast<Index>(png_get_image_height(png, info));
  interleaved.assign(static_cast<std::size_t>(height) * width * 3, 0);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (Index y = 0; y < height; ++y)
    rows[static_cast<std::size_t>(y)] = interleaved.data() + static_cast<std::size_t>(y) * width * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
}

RgbImage read_ppm(const std::string& path, std::FILE* f) {
  auto next_token = [&]() -> long {
    int c;
    // skip whitespace and '#' comments
    while ((c = std::fgetc(f)) != EOF) {
      if (c == '#') {
        while ((c = std::fgetc(f)) != EOF && c != '\n') {
        }
      } else if (!std::isspace(c)) {
        break;
      }
    }
    if (c == EOF) throw ParseError("truncated PPM header in " + path);
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
      v = v * 10 + (c - '0');
      c = std::fgetc(f);
    }
    return v;
  };

  char magic[3] = {};
  if (std::fread(magic, 1, 2, f) != 2 || std::strncmp(magic, "P6", 2) != 0)
    throw ParseError("not a binary PPM (P6): " + path);
  const long w = next_token();
  const long h = next_token();
  const long maxval = next_token();
  if (w < 1 || h < 1) throw ParseError("bad PPM dimensions in " + path);
  if (maxval != 255) throw ParseError("only 8-bit PPM supported: " + path);

  std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h * 3);
  if (std::fread(buf.data(), 1, buf.size(), f) != buf.size())
    throw ParseError("truncated PPM pixel data in " + path);

  RgbImage img(h, w);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      img.r(y, x) = buf[i];
      img.g(y, x) = buf[i + 1];
      img.b(y, x) = buf[i + 2];
    }
  }
  return img;
}

void write_png(const std::string& path, Index height, Index width, int color_type,
               const std::vector<png_bytep>& rows) {
  auto f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode PNG " + path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytep*>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

bool has_png_magic(std::FILE* f) {
  unsigned char sig[8] = {};
  const std::size_t n = std::fread(sig, 1, 8, f);
  std::rewind(f);
  return n == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

}  // namespace

RgbImage read_image(const std::string& path) {
  auto f = open_file(path, "rb");
  if (has_png_magic(f.get())) {
    Index h = 0, w = 0;
    std::vector<std::uint8_t> buf;
    read_png_rgb(path, f.get(), h, w, buf);
    RgbImage img(h, w);
    for (Index y = 0; y < h; ++y) {
      for (Index x = 0; x < w; ++x) {
        const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
        img.r(y, x) = buf[i];
        img.g(y, x) = buf[i + 1];
        img.b(y, x) = buf[i + 2];
      }
    }
    return img;
  }
  return read_ppm(path, f.get());
}

BinaryMask read_mask_png(const std::string& path) {
  const RgbImage img = read_image(path);
  // Gray PNGs come back replicated; any nonzero level is foreground.
  return (img.r.cast<int>() > 0).cast<std::uint8_t>();
}

void write_mask_png(const std::string& path, const BinaryMask& mask) {
  Plane<std::uint8_t> scaled = mask * std::uint8_t{255};
  std::vector<png_bytep> rows(static_cast<std::size_t>(mask.rows()));
  for (Index y = 0; y < mask.rows(); ++y) rows[static_cast<std::size_t>(y)] = scaled.row(y).data();
  write_png(path, mask.rows(), mask.cols(), PNG_COLOR_TYPE_GRAY, rows);
}

void write_rgb_png(const std::string& path, const RgbImage& img) {
  const Index h = img.height();
  const Index w = img.width();
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(h) * w * 3);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      buf[i] = img.r(y, x);
      buf[i + 1] = img.g(y, x);
      buf[i + 2] = img.b(y, x);
    }
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(h));
  for (Index y = 0; y < h; ++y) rows[static_cast<std::size_t>(y)] = buf.data() + static_cast<std::size_t>(y) * w * 3;
  write_png(path, h, w, PNG_COLOR_TYPE_RGB, rows);
}

}  // namespace locus
