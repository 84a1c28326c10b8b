// Copyright 2026 The aimbot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aimbot/png_io.hpp"

#include <png.h>

#include <cerrno>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <string>

#include "aimbot/error.hpp"

namespace aimbot {

namespace {

struct ErrorSink {
  char message[256] = "libpng error";
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  std::longjmp(png_jmpbuf(png), 1);
}

void on_png_warning(png_structp, png_const_charp) {}

class File {
 public:
  File(const std::filesystem::path& path, const char* mode)
      : fp_(std::fopen(path.c_str(), mode)) {
    if (!fp_) throw IoError(path, std::string("cannot open: ") + std::strerror(errno));
  }
  ~File() {
    if (fp_) std::fclose(fp_);
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
  std::FILE* get() const { return fp_; }
  int close() {
    const int rc = std::fclose(fp_);
    fp_ = nullptr;
    return rc;
  }

 private:
  std::FILE* fp_;
};

struct Reader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ErrorSink sink;

  explicit Reader(const std::filesystem::path& path) {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) throw IoError(path, "out of memory creating PNG reader");
  }
  ~Reader() { png_destroy_read_struct(&png, &info, nullptr); }
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;
};

struct Writer {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ErrorSink sink;

  explicit Writer(const std::filesystem::path& path) {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) throw IoError(path, "out of memory creating PNG writer");
  }
  ~Writer() { png_destroy_write_struct(&png, &info); }
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;
};

enum class Target { kInfoOnly, kRgb8, kGray16 };

// Decoded pixels plus row pointers; owned by the caller so that a longjmp
// out of decode() never skips a destructor.
struct Decoded {
  PngInfo info;
  std::vector<std::uint8_t> data;
  std::vector<png_bytep> rows;
  bool wrong_format = false;
};

// Only trivially destructible locals between setjmp and the last libpng call.
bool decode(Reader& r, std::FILE* fp, Target target, Decoded& out) {
  if (setjmp(png_jmpbuf(r.png))) return false;
  png_init_io(r.png, fp);
  png_read_info(r.png, r.info);
  out.info.width = static_cast<int>(png_get_image_width(r.png, r.info));
  out.info.height = static_cast<int>(png_get_image_height(r.png, r.info));
  out.info.bit_depth = png_get_bit_depth(r.png, r.info);
  out.info.channels = png_get_channels(r.png, r.info);
  if (target == Target::kInfoOnly) return true;

  const int color = png_get_color_type(r.png, r.info);
  std::size_t row_bytes = 0;
  if (target == Target::kRgb8) {
    png_set_expand(r.png);
    png_set_strip_16(r.png);
    png_set_strip_alpha(r.png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(r.png);
    }
    row_bytes = 3 * static_cast<std::size_t>(out.info.width);
  } else {
    if (color != PNG_COLOR_TYPE_GRAY || out.info.bit_depth != 16) {
      out.wrong_format = true;
      return true;
    }
    row_bytes = 2 * static_cast<std::size_t>(out.info.width);
  }
  png_read_update_info(r.png, r.info);
  if (png_get_rowbytes(r.png, r.info) != row_bytes) {
    out.wrong_format = true;
    return true;
  }
  out.data.resize(row_bytes * static_cast<std::size_t>(out.info.height));
  out.rows.resize(static_cast<std::size_t>(out.info.height));
  for (std::size_t y = 0; y < out.rows.size(); ++y) out.rows[y] = out.data.data() + y * row_bytes;
  png_read_image(r.png, out.rows.data());
  png_read_end(r.png, nullptr);
  return true;
}

Decoded decode_file(const std::filesystem::path& path, Target target) {
  File file(path, "rb");
  std::uint8_t sig[8] = {};
  if (std::fread(sig, 1, sizeof(sig), file.get()) != sizeof(sig) ||
      png_sig_cmp(sig, 0, sizeof(sig)) != 0) {
    throw IoError(path, "not a PNG file");
  }
  Reader reader(path);
  png_set_sig_bytes(reader.png, sizeof(sig));
  Decoded out;
  if (!decode(reader, file.get(), target, out)) throw IoError(path, reader.sink.message);
  if (out.wrong_format) {
    throw IoError(path, target == Target::kGray16
                            ? "depth PNG must be 16-bit single-channel"
                            : "unsupported PNG pixel layout");
  }
  return out;
}

bool encode(Writer& w, std::FILE* fp, int width, int height, int bit_depth, int color,
            std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(w.png))) return false;
  png_init_io(w.png, fp);
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(w.png, 6);
  png_write_info(w.png, w.info);
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
  return true;
}

void encode_file(const std::filesystem::path& path, int width, int height, int bit_depth,
           int color, std::vector<std::uint8_t>& data, std::size_t row_bytes) {
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = data.data() + y * row_bytes;
  File file(path, "wb");
  Writer writer(path);
  if (!encode(writer, file.get(), width, height, bit_depth, color, rows)) {
    throw IoError(path, writer.sink.message);
  }
  if (file.close() != 0) throw IoError(path, "write failed");
}

}  // namespace

PngInfo read_png_info(const std::filesystem::path& path) {
  return decode_file(path, Target::kInfoOnly).info;
}

RgbImage read_png_rgb(const std::filesystem::path& path) {
  Decoded d = decode_file(path, Target::kRgb8);
  RgbImage img(d.info.width, d.info.height);
  img.bytes() = std::move(d.data);
  return img;
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image) {
  std::vector<std::uint8_t> data = image.bytes();
  encode_file(path, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB, data,
        3 * static_cast<std::size_t>(image.width()));
}

std::uint16_t depth_to_millimeters(double meters) {
  if (!DepthImage::is_valid_depth(meters)) return 0;
  const double mm = std::round(meters * 1000.0);
  if (mm >= 65535.0) return 65535;
  return static_cast<std::uint16_t>(mm);
}

DepthImage read_png_depth(const std::filesystem::path& path) {
  const Decoded d = decode_file(path, Target::kGray16);
  DepthImage depth(d.info.width, d.info.height);
  auto& values = depth.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto mm = static_cast<std::uint16_t>((d.data[2 * i] << 8) | d.data[2 * i + 1]);
    values[i] = millimeters_to_depth(mm);
  }
  return depth;
}

void write_png_depth(const std::filesystem::path& path, const DepthImage& depth) {
  const auto& values = depth.values();
  std::vector<std::uint8_t> data(2 * values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint16_t mm = depth_to_millimeters(values[i]);
    data[2 * i] = static_cast<std::uint8_t>(mm >> 8);
    data[2 * i + 1] = static_cast<std::uint8_t>(mm & 0xff);
  }
  encode_file(path, depth.width(), depth.height(), 16, PNG_COLOR_TYPE_GRAY, data,
        2 * static_cast<std::size_t>(depth.width()));
}

}  // namespace aimbot
