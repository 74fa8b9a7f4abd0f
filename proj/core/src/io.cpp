// Copyright 2026 The SSN-CPU Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssn/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace ssn::io {

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

// Netpbm header tokens, skipping whitespace and '#' comments.
class PnmHeader {
 public:
  explicit PnmHeader(const std::string& data) : data_(data) {}

  std::string token() {
    skip();
    std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (start == pos_) throw FormatError("truncated PNM header");
    return data_.substr(start, pos_ - start);
  }

  long number() {
    const std::string t = token();
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (*end != '\0' || v <= 0) throw FormatError("bad PNM header field: " + t);
    return v;
  }

  // offset of the raster: exactly one whitespace byte after the last field
  std::size_t raster_offset() const { return pos_ + 1; }

 private:
  void skip() {
    while (pos_ < data_.size()) {
      if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(data_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& data_;
  std::size_t pos_ = 0;
};

RawImage read_ppm(const std::string& path, const std::string& data) {
  PnmHeader hdr(data);
  if (hdr.token() != "P6") throw FormatError("not a binary PPM: " + path);
  const long w = hdr.number(), h = hdr.number(), maxval = hdr.number();
  if (maxval > 65535) throw FormatError("bad PPM maxval: " + path);
  const std::size_t bps = maxval > 255 ? 2 : 1;
  const std::size_t off = hdr.raster_offset();
  const std::size_t need = static_cast<std::size_t>(w) * h * 3 * bps;
  if (data.size() < off + need) throw FormatError("truncated PPM raster: " + path);
  RawImage img(static_cast<int>(w), static_cast<int>(h));
  const auto* src = reinterpret_cast<const unsigned char*>(data.data() + off);
  for (std::size_t i = 0; i < img.rgb.size(); ++i) {
    const unsigned v = bps == 2 ? (src[2 * i] << 8 | src[2 * i + 1]) : src[i];
    img.rgb[i] = static_cast<std::uint8_t>(std::lround(255.0 * v / maxval));
  }
  return img;
}

RawImage read_png(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed");
  }
  RawImage img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG: " + path);
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(w) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("unsupported PNG layout: " + path);
  }
  img = RawImage(w, h);
  rows.resize(static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) rows[y] = img.at(0, y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("failed writing " + path);
}

bool has_extension(const std::string& path, const std::string& ext) {
  if (path.size() < ext.size()) return false;
  std::string tail = path.substr(path.size() - ext.size());
  std::transform(tail.begin(), tail.end(), tail.begin(), [](unsigned char c) { return std::tolower(c); });
  return tail == ext;
}

RawImage read_image(const std::string& path) {
  const std::string data = read_file(path);
  if (data.size() >= 8 && std::memcmp(data.data(), "\x89PNG\r\n\x1a\n", 8) == 0) return read_png(path);
  if (data.size() >= 2 && data[0] == 'P' && data[1] == '6') return read_ppm(path, data);
  throw FormatError("unsupported image format (need PNG or P6 PPM): " + path);
}

void write_png(const std::string& path, const RawImage& img) {
  img.validate();
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing PNG: " + path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) png_write_row(png, const_cast<png_bytep>(img.at(0, y)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_ppm(const std::string& path, const RawImage& img) {
  img.validate();
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  write_file(path, out);
}

LabelMap read_label_map(const std::string& path) {
  const std::string data = read_file(path);
  LabelMap lm;
  if (data.size() >= 2 && data[0] == 'P' && data[1] == '5') {
    PnmHeader hdr(data);
    hdr.token();
    const long w = hdr.number(), h = hdr.number(), maxval = hdr.number();
    if (maxval > 65535) throw FormatError("bad PGM maxval: " + path);
    const std::size_t bps = maxval > 255 ? 2 : 1;
    const std::size_t off = hdr.raster_offset();
    const std::size_t n = static_cast<std::size_t>(w) * h;
    if (data.size() < off + n * bps) throw FormatError("truncated PGM raster: " + path);
    const auto* src = reinterpret_cast<const unsigned char*>(data.data() + off);
    lm.width = static_cast<int>(w);
    lm.height = static_cast<int>(h);
    lm.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      lm.labels[i] = static_cast<SuperpixelId>(bps == 2 ? (src[2 * i] << 8 | src[2 * i + 1]) : src[i]);
    return lm;
  }
  // CSV grid
  std::istringstream in(data);
  std::string line;
  int width = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    int count = 0;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const long v = std::strtol(cell.c_str(), &end, 10);
      if (end == cell.c_str() || v < 0 || v > 0x7fffffffL) throw FormatError("bad label value '" + cell + "' in " + path);
      lm.labels.push_back(static_cast<SuperpixelId>(v));
      ++count;
    }
    if (width < 0) width = count;
    if (count != width) throw FormatError("ragged label CSV: " + path);
    ++lm.height;
  }
  if (width <= 0) throw FormatError("empty label map: " + path);
  lm.width = width;
  return lm;
}

void write_label_pgm(const std::string& path, const LabelMap& lm) {
  for (auto v : lm.labels)
    if (v < 0 || v > 65535) throw InvalidArgument("write_label_pgm: label does not fit in 16 bits");
  std::string out = "P5\n" + std::to_string(lm.width) + " " + std::to_string(lm.height) + "\n65535\n";
  out.reserve(out.size() + 2 * lm.labels.size());
  for (auto v : lm.labels) {
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
  }
  write_file(path, out);
}

void write_label_csv(const std::string& path, const LabelMap& lm) {
  std::string out;
  for (int y = 0; y < lm.height; ++y) {
    for (int x = 0; x < lm.width; ++x) {
      if (x) out.push_back(',');
      out += std::to_string(lm.labels[static_cast<std::size_t>(y) * lm.width + x]);
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

Matrix read_flow_csv(const std::string& path, int* width, int* height) {
  std::istringstream in(read_file(path));
  std::string line;
  int w = 0, h = 0;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "# width=%d height=%d", &w, &h) != 2 || w <= 0 || h <= 0)
    throw FormatError("flow CSV must start with '# width=W height=H': " + path);
  if (!std::getline(in, line) || line.rfind("u,v", 0) != 0) throw FormatError("flow CSV missing u,v header: " + path);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  Matrix flow(n, 2);
  std::size_t p = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (p >= n) throw FormatError("flow CSV has too many rows: " + path);
    double u = 0, v = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &u, &v) != 2 || !std::isfinite(u) || !std::isfinite(v))
      throw FormatError("bad flow row in " + path);
    flow(p, 0) = u;
    flow(p, 1) = v;
    ++p;
  }
  if (p != n) throw FormatError("flow CSV row count does not match dims: " + path);
  if (width) *width = w;
  if (height) *height = h;
  return flow;
}

void write_flow_csv(const std::string& path, const Matrix& flow, int width, int height) {
  require_shape(flow, static_cast<std::size_t>(width) * height, 2, "write_flow_csv");
  std::string out = "# width=" + std::to_string(width) + " height=" + std::to_string(height) + "\nu,v\n";
  char buf[64];
  for (std::size_t p = 0; p < flow.rows(); ++p) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", flow(p, 0), flow(p, 1));
    out += buf;
  }
  write_file(path, out);
}

RawImage boundary_overlay(const RawImage& img, const LabelMap& labels, const unsigned char color[3]) {
  if (labels.width != img.width || labels.height != img.height) throw InvalidArgument("boundary_overlay: size mismatch");
  RawImage out = img;
  const auto mask = boundary_mask(labels.labels, labels.width, labels.height);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    if (!mask[p]) continue;
    std::memcpy(out.rgb.data() + 3 * p, color, 3);
  }
  return out;
}

}  // namespace ssn::io
