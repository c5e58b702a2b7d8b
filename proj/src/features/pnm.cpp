// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "cbir/error.hpp"
#include "cbir/features.hpp"

namespace cbir {
namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& bytes) : s_(bytes) {}

  // Next whitespace-separated unsigned integer, skipping '#' comments.
  std::size_t number(const char* what) {
    skip_space();
    std::size_t v = 0;
    bool any = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<std::size_t>(s_[pos_] - '0');
      if (v > (1u << 30)) throw FormatError(std::string("PNM ") + what + " too large");
      ++pos_;
      any = true;
    }
    if (!any) throw FormatError(std::string("PNM: expected ") + what);
    return v;
  }

  // Exactly one whitespace byte separates the header from binary samples.
  void end_header() {
    if (pos_ >= s_.size() || !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      throw FormatError("PNM: missing whitespace after header");
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  void skip_space() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 2;
};

}  // namespace

ImageBuffer read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 2 || bytes[0] != 'P') throw FormatError(path.string() + ": not a PNM image");
  const char kind = bytes[1];
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    throw FormatError(path.string() + ": unsupported PNM variant P" + std::string(1, kind));
  }
  const std::size_t channels = (kind == '3' || kind == '6') ? 3 : 1;
  Cursor cur(bytes);
  const std::size_t width = cur.number("width");
  const std::size_t height = cur.number("height");
  const std::size_t maxval = cur.number("maxval");
  if (width == 0 || height == 0) throw FormatError(path.string() + ": zero image extent");
  if (maxval == 0 || maxval > 65535) throw FormatError(path.string() + ": bad maxval");
  const std::size_t count = width * height * channels;
  std::vector<double> px(count);
  const double scale = 1.0 / static_cast<double>(maxval);
  auto store = [&](std::size_t i, std::size_t v) {
    if (v > maxval) throw FormatError(path.string() + ": sample exceeds maxval");
    px[i] = static_cast<double>(v) * scale;
  };
  if (kind == '2' || kind == '3') {
    for (std::size_t i = 0; i < count; ++i) store(i, cur.number("sample"));
  } else {
    cur.end_header();
    const std::size_t width_bytes = maxval > 255 ? 2 : 1;
    std::size_t p = cur.pos();
    if (bytes.size() - p < count * width_bytes) throw FormatError(path.string() + ": truncated");
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t v = static_cast<unsigned char>(bytes[p++]);
      if (width_bytes == 2) v = (v << 8) | static_cast<unsigned char>(bytes[p++]);
      store(i, v);
    }
  }
  return ImageBuffer(width, height, channels, std::move(px));
}

void write_pnm(const ImageBuffer& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image " + path.string());
  out << (img.channels() == 3 ? "P6" : "P5") << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  for (double v : img.pixels()) {
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace cbir
