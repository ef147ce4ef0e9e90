#include "hashcoll/image.hpp"

#include <algorithm>
#include <cmath>

namespace hashcoll {

RgbImage::RgbImage(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), data_(height * width * 3, fill) {
  if (height == 0 || width == 0) throw ImageError("image dimensions must be positive");
}

RgbImage::RgbImage(std::size_t height, std::size_t width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (height == 0 || width == 0) throw ImageError("image dimensions must be positive");
  if (data_.size() != height * width * 3) throw ImageError("RGB buffer length does not match h*w*3");
}

bool RgbImage::in_unit_box() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

GrayImage::GrayImage(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), data_(height * width, fill) {
  if (height == 0 || width == 0) throw ImageError("image dimensions must be positive");
}

GrayImage::GrayImage(std::size_t height, std::size_t width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (height == 0 || width == 0) throw ImageError("image dimensions must be positive");
  if (data_.size() != height * width) throw ImageError("gray buffer length does not match h*w");
}

GrayImage to_luma(const RgbImage& img) {
  GrayImage out(img.height(), img.width());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = kLumaR * src[3 * i] + kLumaG * src[3 * i + 1] + kLumaB * src[3 * i + 2];
  }
  return out;
}

RgbImage gray_to_rgb(const GrayImage& img) {
  RgbImage out(img.height(), img.width());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  }
  return out;
}

RgbImage quantize(const RgbImage& img, int levels) {
  RgbImage out = img;
  const double scale = levels;
  for (double& v : out.values()) v = std::round(std::clamp(v, 0.0, 1.0) * scale) / scale;
  return out;
}

RgbImage clamp_unit(RgbImage img) {
  for (double& v : img.values()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

}  // namespace hashcoll
