#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "common/fileutil.hpp"
#include "hashcoll/image.hpp"

namespace hashcoll {
namespace {

constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

struct MemReader {
  std::span<const unsigned char> bytes;
  std::size_t pos = 0;
};

struct PngErrorState {
  std::jmp_buf jmp;
  char message[256] = {};
};

void png_error_cb(png_structp png, png_const_charp msg) {
  auto* st = static_cast<PngErrorState*>(png_get_error_ptr(png));
  std::snprintf(st->message, sizeof st->message, "%s", msg);
  std::longjmp(st->jmp, 1);
}

void png_warning_cb(png_structp, png_const_charp) {}

void png_read_cb(png_structp png, png_bytep out, png_size_t n) {
  auto* r = static_cast<MemReader*>(png_get_io_ptr(png));
  if (r->pos + n > r->bytes.size()) png_error(png, "truncated PNG");
  std::memcpy(out, r->bytes.data() + r->pos, n);
  r->pos += n;
}

void png_write_cb(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void png_flush_cb(png_structp) {}

struct DecodedPng {
  png_uint_32 width = 0, height = 0;
  int depth = 8;
  std::vector<unsigned char> rgb;  // 3 samples per pixel, 1 or 2 bytes each
};

// Kept free of C++ objects with non-trivial destructors between setjmp and longjmp.
bool decode_png_raw(MemReader& reader, DecodedPng& out, PngErrorState& err) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_cb, png_warning_cb);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(err.jmp)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &reader, png_read_cb);
  png_read_info(png, info);
  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth < 8) depth = 8;
  png_read_update_info(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  if (rowbytes != static_cast<std::size_t>(w) * 3 * (depth / 8)) {
    std::snprintf(err.message, sizeof err.message, "unsupported PNG layout");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  out.width = w;
  out.height = h;
  out.depth = depth;
  out.rgb.resize(rowbytes * h);
  for (png_uint_32 r = 0; r < h; ++r) png_read_row(png, out.rgb.data() + r * rowbytes, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

RgbImage decode_png(std::span<const unsigned char> bytes) {
  MemReader reader{bytes, 0};
  DecodedPng raw;
  PngErrorState err;
  if (!decode_png_raw(reader, raw, err)) {
    throw ImageError(std::string("PNG decode failed: ") + (err.message[0] ? err.message : "libpng init"));
  }
  if (raw.width == 0 || raw.height == 0) throw ImageError("zero image dimension");
  std::vector<double> data(static_cast<std::size_t>(raw.width) * raw.height * 3);
  if (raw.depth == 16) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      const unsigned v = (unsigned(raw.rgb[2 * i]) << 8) | raw.rgb[2 * i + 1];
      data[i] = v / 65535.0;
    }
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = raw.rgb[i] / 255.0;
  }
  return RgbImage(raw.height, raw.width, std::move(data));
}

// PPM header tokens are separated by whitespace; '#' starts a comment to end of line.
std::size_t read_ppm_token(std::span<const unsigned char> b, std::size_t& pos) {
  for (;;) {
    while (pos < b.size() && std::isspace(b[pos])) ++pos;
    if (pos < b.size() && b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= b.size() || !std::isdigit(b[pos])) throw ImageError("malformed PPM header");
  std::size_t v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > (1u << 30)) throw ImageError("PPM header value too large");
    ++pos;
  }
  return v;
}

RgbImage decode_ppm(std::span<const unsigned char> b) {
  std::size_t pos = 2;
  const std::size_t w = read_ppm_token(b, pos);
  const std::size_t h = read_ppm_token(b, pos);
  const std::size_t maxval = read_ppm_token(b, pos);
  if (w == 0 || h == 0) throw ImageError("zero image dimension");
  if (maxval == 0 || maxval > 65535) throw ImageError("bad PPM maxval");
  if (pos >= b.size() || !std::isspace(b[pos])) throw ImageError("malformed PPM header");
  ++pos;
  const std::size_t bps = maxval < 256 ? 1 : 2;
  const std::size_t n = w * h * 3;
  if (b.size() - pos < n * bps) throw ImageError("truncated PPM");
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = bps == 1 ? b[pos + i] : (unsigned(b[pos + 2 * i]) << 8) | b[pos + 2 * i + 1];
    data[i] = static_cast<double>(v) / static_cast<double>(maxval);
  }
  return RgbImage(h, w, std::move(data));
}

}  // namespace

RgbImage decode_image(std::span<const unsigned char> bytes) {
  if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_ppm(bytes);
  throw ImageError("unsupported image format");
}

RgbImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot open image: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const ImageError& e) {
    throw ImageError(path.string() + ": " + e.what());
  }
}

namespace {

bool encode_png_raw(const std::vector<unsigned char>& rows, png_uint_32 w, png_uint_32 h, int depth,
                    std::vector<unsigned char>& out, PngErrorState& err) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_cb, png_warning_cb);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(err.jmp)) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &out, png_write_cb, png_flush_cb);
  png_set_IHDR(png, info, w, h, depth, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t rowbytes = static_cast<std::size_t>(w) * 3 * (depth / 8);
  for (png_uint_32 r = 0; r < h; ++r) {
    png_write_row(png, const_cast<png_bytep>(rows.data() + r * rowbytes));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

void save_png(const std::filesystem::path& path, const RgbImage& img, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw ImageError("PNG bit depth must be 8 or 16");
  const auto src = img.data();
  std::vector<unsigned char> rows(src.size() * (bit_depth / 8));
  if (bit_depth == 16) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      const auto v = static_cast<unsigned>(std::lround(std::clamp(src[i], 0.0, 1.0) * 65535.0));
      rows[2 * i] = static_cast<unsigned char>(v >> 8);
      rows[2 * i + 1] = static_cast<unsigned char>(v & 0xff);
    }
  } else {
    for (std::size_t i = 0; i < src.size(); ++i) {
      rows[i] = static_cast<unsigned char>(std::lround(std::clamp(src[i], 0.0, 1.0) * 255.0));
    }
  }
  std::vector<unsigned char> encoded;
  PngErrorState err;
  if (!encode_png_raw(rows, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), bit_depth,
                      encoded, err)) {
    throw ImageError(std::string("PNG encode failed: ") + err.message);
  }
  write_file_atomic(path, encoded);
}

void save_ppm(const std::filesystem::path& path, const RgbImage& img) {
  const std::string header = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<unsigned char> bytes(header.begin(), header.end());
  for (double v : img.data()) bytes.push_back(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  write_file_atomic(path, bytes);
}

bool is_image_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".ppm";
}

}  // namespace hashcoll
