#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hashcoll/attack.hpp"

namespace hashcoll {

namespace {

constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr std::size_t kWindow = 8;

// Summed-area table with a zero top row and left column.
std::vector<double> integral(const GrayImage& img, auto&& f) {
  const std::size_t h = img.height(), w = img.width();
  std::vector<double> s((h + 1) * (w + 1), 0.0);
  for (std::size_t r = 0; r < h; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < w; ++c) {
      row += f(r, c);
      s[(r + 1) * (w + 1) + c + 1] = s[r * (w + 1) + c + 1] + row;
    }
  }
  return s;
}

}  // namespace

double ssim(const GrayImage& a, const GrayImage& b) {
  if (a.height() != b.height() || a.width() != b.width()) throw std::invalid_argument("ssim: dimension mismatch");
  const std::size_t h = a.height(), w = a.width();
  const std::size_t wh = std::min(kWindow, h), ww = std::min(kWindow, w);
  const double n = static_cast<double>(wh * ww);

  const auto sa = integral(a, [&](std::size_t r, std::size_t c) { return a.at(r, c); });
  const auto sb = integral(b, [&](std::size_t r, std::size_t c) { return b.at(r, c); });
  const auto saa = integral(a, [&](std::size_t r, std::size_t c) { return a.at(r, c) * a.at(r, c); });
  const auto sbb = integral(b, [&](std::size_t r, std::size_t c) { return b.at(r, c) * b.at(r, c); });
  const auto sab = integral(a, [&](std::size_t r, std::size_t c) { return a.at(r, c) * b.at(r, c); });

  auto box = [&](const std::vector<double>& s, std::size_t r, std::size_t c) {
    const std::size_t W = w + 1;
    return s[(r + wh) * W + c + ww] - s[r * W + c + ww] - s[(r + wh) * W + c] + s[r * W + c];
  };

  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r + wh <= h; ++r) {
    for (std::size_t c = 0; c + ww <= w; ++c) {
      const double mx = box(sa, r, c) / n;
      const double my = box(sb, r, c) / n;
      const double vx = box(saa, r, c) / n - mx * mx;
      const double vy = box(sbb, r, c) / n - my * my;
      const double cxy = box(sab, r, c) / n - mx * my;
      total += ((2 * mx * my + kC1) * (2 * cxy + kC2)) / ((mx * mx + my * my + kC1) * (vx + vy + kC2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace hashcoll
