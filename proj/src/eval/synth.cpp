#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "hashcoll/eval.hpp"

namespace hashcoll {

namespace {

using Color = std::array<double, 3>;

Color random_color(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  return {u(rng), u(rng), u(rng)};
}

Color mix(const Color& a, const Color& b, double t) {
  return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t};
}

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3 - 2 * t);
}

struct Wave {
  double fx, fy, phase, amp;
};

}  // namespace

RgbImage synth_image(std::uint64_t seed, std::size_t height, std::size_t width) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x51ed270b27b4c6f1ULL);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double h = static_cast<double>(height), w = static_cast<double>(width);
  RgbImage img(height, width);

  // Backdrop.
  const int backdrop = static_cast<int>(u01(rng) * 3);
  const Color ca = random_color(rng), cb = random_color(rng);
  const double angle = u01(rng) * 2 * std::numbers::pi;
  const double horizon = 0.3 + 0.4 * u01(rng);
  const double tilt = (u01(rng) - 0.5) * 0.3;
  const double cx = u01(rng), cy = u01(rng), rad = 0.3 + 0.5 * u01(rng);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double y = (r + 0.5) / h, x = (c + 0.5) / w;
      double t = 0.0;
      switch (backdrop) {
        case 0: t = smoothstep(-0.02, 0.02, y - horizon - tilt * (x - 0.5)); break;
        case 1: t = std::clamp(0.5 + (x - 0.5) * std::cos(angle) + (y - 0.5) * std::sin(angle), 0.0, 1.0); break;
        default: t = std::clamp(std::hypot(x - cx, y - cy) / rad, 0.0, 1.0); break;
      }
      const Color col = mix(ca, cb, t);
      for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) = col[ch];
    }
  }

  // Shapes.
  const int shapes = static_cast<int>(u01(rng) * 6);
  for (int s = 0; s < shapes; ++s) {
    const Color col = random_color(rng);
    const bool ellipse = u01(rng) < 0.5;
    const double sx = 0.05 + 0.3 * u01(rng), sy = 0.05 + 0.3 * u01(rng);
    const double px = u01(rng), py = u01(rng);
    const double opacity = 0.5 + 0.5 * u01(rng);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double y = ((r + 0.5) / h - py) / sy, x = ((c + 0.5) / w - px) / sx;
        const double dist = ellipse ? std::hypot(x, y) : std::max(std::abs(x), std::abs(y));
        const double px_edge = 1.5 / (std::min(sx, sy) * std::min(h, w));
        const double a = opacity * (1.0 - smoothstep(1.0 - px_edge, 1.0 + px_edge, dist));
        if (a <= 0.0) continue;
        for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) += (col[ch] - img.at(r, c, ch)) * a;
      }
    }
  }

  // Mid-frequency texture, shared by all channels with a slight tint.
  const int nwaves = 3 + static_cast<int>(u01(rng) * 4);
  const double tex_amp = 0.01 + 0.05 * u01(rng);
  std::vector<Wave> waves;
  for (int i = 0; i < nwaves; ++i) {
    waves.push_back({(u01(rng) - 0.5) * 24, (u01(rng) - 0.5) * 24, u01(rng) * 2 * std::numbers::pi,
                     tex_amp * (0.5 + u01(rng)) / std::sqrt(static_cast<double>(nwaves))});
  }
  const Color tint = {0.8 + 0.4 * u01(rng), 0.8 + 0.4 * u01(rng), 0.8 + 0.4 * u01(rng)};
  std::normal_distribution<double> noise(0.0, 1.0);
  const double sigma = 0.02 * u01(rng);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double y = (r + 0.5) / h, x = (c + 0.5) / w;
      double tex = 0.0;
      for (const auto& wv : waves) tex += wv.amp * std::sin(2 * std::numbers::pi * (wv.fx * x + wv.fy * y) + wv.phase);
      for (int ch = 0; ch < 3; ++ch) {
        img.at(r, c, ch) = std::clamp(img.at(r, c, ch) + tint[ch] * tex + sigma * noise(rng), 0.0, 1.0);
      }
    }
  }
  return img;
}

std::vector<NamedImage> synth_corpus(std::size_t count, std::uint64_t seed, std::size_t min_side,
                                     std::size_t max_side, bool quantize8) {
  if (min_side == 0 || max_side < min_side) throw std::invalid_argument("bad corpus side range");
  std::vector<NamedImage> out(count);
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    std::mt19937_64 rng(seed ^ (0xa0761d6478bd642fULL * static_cast<std::uint64_t>(i + 1)));
    std::uniform_int_distribution<std::size_t> side(min_side, max_side);
    const std::size_t h = side(rng), w = side(rng);
    char name[32];
    std::snprintf(name, sizeof name, "img_%05ld.png", i);
    RgbImage im = synth_image(rng(), h, w);
    out[i] = {name, quantize8 ? quantize(im, 255) : std::move(im)};
  }
  return out;
}

void generate_corpus(const std::filesystem::path& dir, std::size_t count, std::uint64_t seed, std::size_t min_side,
                     std::size_t max_side) {
  std::filesystem::create_directories(dir);
  const auto images = synth_corpus(count, seed, min_side, max_side, true);
  for (const auto& im : images) save_png(dir / im.id, im.image, 8);
}

}  // namespace hashcoll
