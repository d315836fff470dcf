// Copyright 2026 The Brandnet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "brandnet/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "brandnet/error.hpp"
#include "text_io.hpp"

namespace brandnet {

double GrayImage::sample(double x, double y) const {
  x = std::clamp(x, 0.0, static_cast<double>(width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
  const double bottom = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

namespace {

class PnmHeaderReader {
 public:
  PnmHeaderReader(const std::string& data, const std::filesystem::path& path) : data_(data), path_(path) {}

  long next_int() {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (start == pos_) fail("malformed header");
    const auto v = text::parse_int(std::string_view(data_).substr(start, pos_ - start));
    if (!v || *v <= 0 || *v > (1 << 24)) fail("header value out of range");
    return static_cast<long>(*v);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      fail("missing raster separator");
    }
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw DataError("bad PNM file " + path_.string() + ": " + why);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (std::isspace(static_cast<unsigned char>(data_[pos_]))) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& data_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 2;
};

}  // namespace

GrayImage read_pnm(const std::filesystem::path& path) {
  const std::string data = text::read_file(path);
  PnmHeaderReader header(data, path);
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6')) {
    header.fail("expected P5 or P6 magic");
  }
  const bool color = data[1] == '6';
  const long width = header.next_int();
  const long height = header.next_int();
  const long maxval = header.next_int();
  if (maxval > 65535) header.fail("maxval above 65535");
  const std::size_t offset = header.raster_offset();
  const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
  const std::size_t channels = color ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(width) * height * channels * bytes_per_sample;
  if (data.size() - offset < need) header.fail("truncated raster");

  auto sample_at = [&](std::size_t i) {
    const auto* p = reinterpret_cast<const unsigned char*>(data.data() + offset);
    const unsigned v = bytes_per_sample == 2 ? (p[2 * i] << 8) | p[2 * i + 1] : p[i];
    return static_cast<double>(v) / static_cast<double>(maxval);
  };

  GrayImage img(static_cast<int>(width), static_cast<int>(height));
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    if (color) {
      img.pixels[i] = 0.299 * sample_at(3 * i) + 0.587 * sample_at(3 * i + 1) + 0.114 * sample_at(3 * i + 2);
    } else {
      img.pixels[i] = sample_at(i);
    }
  }
  return img;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.pixels.size());
  for (double v : image.pixels) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
  }
  text::write_file(path, out);
}

}  // namespace brandnet
