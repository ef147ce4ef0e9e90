#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hashcoll {

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major RGB raster with interleaved channels, values in [0,1].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t height, std::size_t width, double fill = 0.0);
  RgbImage(std::size_t height, std::size_t width, std::vector<double> data);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t pixels() const { return height_ * width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(std::size_t r, std::size_t c, std::size_t ch) { return data_[(r * width_ + c) * 3 + ch]; }
  double at(std::size_t r, std::size_t c, std::size_t ch) const { return data_[(r * width_ + c) * 3 + ch]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  /// True when every value lies in [0,1].
  bool in_unit_box() const;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

/// Single-channel raster. Intermediate pipeline stages may leave [0,1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t height, std::size_t width, double fill = 0.0);
  GrayImage(std::size_t height, std::size_t width, std::vector<double> data);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

// BT.601 luma weights.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

GrayImage to_luma(const RgbImage& img);

/// Replicates a gray raster into three equal channels.
RgbImage gray_to_rgb(const GrayImage& img);

/// Rounds every value to the nearest multiple of 1/levels (levels = 255 or 65535).
RgbImage quantize(const RgbImage& img, int levels);

RgbImage clamp_unit(RgbImage img);

// ---- file I/O -------------------------------------------------------------

/// Reads an 8-bit (or 16-bit) PNG, gray/RGB/RGBA (alpha dropped), or a binary P6 PPM.
RgbImage load_image(const std::filesystem::path& path);

/// Decodes an image from bytes already in memory. Format is detected by signature.
RgbImage decode_image(std::span<const unsigned char> bytes);

/// Writes an RGB PNG. bit_depth is 8 or 16. Values are clamped and rounded.
void save_png(const std::filesystem::path& path, const RgbImage& img, int bit_depth = 8);

/// Writes a binary P6 PPM with 8-bit samples.
void save_ppm(const std::filesystem::path& path, const RgbImage& img);

/// True if the extension names a format load_image understands.
bool is_image_path(const std::filesystem::path& path);

}  // namespace hashcoll
