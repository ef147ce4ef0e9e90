#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "hashcoll/eval.hpp"
#include "hashcoll/resample.hpp"

namespace hashcoll {

std::string AugSpec::label() const {
  char buf[48];
  switch (kind) {
    case AugKind::Identity: return "identity";
    case AugKind::GaussNoise: std::snprintf(buf, sizeof buf, "noise%.3g", param); break;
    case AugKind::Brightness: std::snprintf(buf, sizeof buf, "brightness%+.3g", param); break;
    case AugKind::Contrast: std::snprintf(buf, sizeof buf, "contrast%+.3g", param); break;
    case AugKind::Rescale: std::snprintf(buf, sizeof buf, "rescale%.3g", param); break;
    case AugKind::BoxBlur3: return "boxblur3";
  }
  return buf;
}

void AugSpec::validate() const {
  switch (kind) {
    case AugKind::GaussNoise:
      if (!(param > 0.0 && param <= 0.5)) throw std::invalid_argument("noise sigma must lie in (0, 0.5]");
      break;
    case AugKind::Brightness:
    case AugKind::Contrast:
      if (!(std::abs(param) <= 0.5)) throw std::invalid_argument("brightness/contrast fraction must lie in [-0.5, 0.5]");
      break;
    case AugKind::Rescale:
      if (!(param >= 0.25 && param <= 4.0)) throw std::invalid_argument("rescale factor must lie in [0.25, 4]");
      break;
    case AugKind::Identity:
    case AugKind::BoxBlur3: break;
  }
}

std::vector<AugSpec> default_aug_suite(std::uint64_t seed) {
  return {
      {AugKind::GaussNoise, 0.02, seed},  {AugKind::Brightness, 0.10, seed}, {AugKind::Brightness, -0.10, seed},
      {AugKind::Contrast, 0.10, seed},    {AugKind::Contrast, -0.10, seed},  {AugKind::Rescale, 0.9, seed},
      {AugKind::BoxBlur3, 0.0, seed},
  };
}

RgbImage augment(const RgbImage& img, const AugSpec& aug, std::uint64_t salt) {
  aug.validate();
  const std::size_t h = img.height(), w = img.width();
  switch (aug.kind) {
    case AugKind::Identity: return img;
    case AugKind::GaussNoise: {
      std::seed_seq seq{aug.seed, salt, std::uint64_t{0x6e6f697365}};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> n(0.0, aug.param);
      RgbImage out = img;
      for (double& v : out.values()) v = std::clamp(v + n(rng), 0.0, 1.0);
      return out;
    }
    case AugKind::Brightness: {
      RgbImage out = img;
      for (double& v : out.values()) v = std::clamp(v * (1.0 + aug.param), 0.0, 1.0);
      return out;
    }
    case AugKind::Contrast: {
      const auto luma = to_luma(img);
      double mean = 0.0;
      for (double v : luma.data()) mean += v;
      mean /= static_cast<double>(luma.size());
      RgbImage out = img;
      for (double& v : out.values()) v = std::clamp(mean + (v - mean) * (1.0 + aug.param), 0.0, 1.0);
      return out;
    }
    case AugKind::Rescale: {
      const auto oh = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(h * aug.param)));
      const auto ow = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(w * aug.param)));
      const Resizer rz(h, w, oh, ow);
      RgbImage out(oh, ow);
      for (std::size_t ch = 0; ch < 3; ++ch) {
        GrayImage plane(h, w);
        for (std::size_t i = 0; i < h * w; ++i) plane.data()[i] = img.data()[3 * i + ch];
        const auto scaled = rz.forward(plane);
        for (std::size_t i = 0; i < oh * ow; ++i) out.data()[3 * i + ch] = std::clamp(scaled.data()[i], 0.0, 1.0);
      }
      return out;
    }
    case AugKind::BoxBlur3: {
      RgbImage out(h, w);
      for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
          for (std::size_t ch = 0; ch < 3; ++ch) {
            double acc = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
              for (int dc = -1; dc <= 1; ++dc) {
                const auto rr = static_cast<std::size_t>(std::clamp<long>(static_cast<long>(r) + dr, 0, static_cast<long>(h) - 1));
                const auto cc = static_cast<std::size_t>(std::clamp<long>(static_cast<long>(c) + dc, 0, static_cast<long>(w) - 1));
                acc += img.at(rr, cc, ch);
              }
            }
            out.at(r, c, ch) = acc / 9.0;
          }
        }
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown augmentation");
}

}  // namespace hashcoll
