#include <cmath>
#include <stdexcept>
#include <string>

#include "hashcoll/diffpipe.hpp"

namespace hashcoll {

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::P0: return "P0";
    case Stage::P1: return "P1";
    case Stage::P2: return "P2";
    case Stage::P3: return "P3";
    case Stage::SoftBits: return "soft";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  if (name == "P0" || name == "p0") return Stage::P0;
  if (name == "P1" || name == "p1") return Stage::P1;
  if (name == "P2" || name == "p2") return Stage::P2;
  if (name == "P3" || name == "p3") return Stage::P3;
  if (name == "soft" || name == "soft_bits") return Stage::SoftBits;
  throw std::invalid_argument("unknown stage: " + std::string(name));
}

Temperature::Temperature(double v) : value(v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("temperature must be positive");
}

BitHash StageOutputs::bits() const {
  BitHash h(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) h.set(j, logits[j] > 0.0);
  return h;
}

std::vector<double> StageOutputs::stage(Stage s) const {
  switch (s) {
    case Stage::P0: return luma.values();
    case Stage::P1: return grid.values();
    case Stage::P2: return transform.values();
    case Stage::P3: return logits;
    case Stage::SoftBits: return soft_bits;
  }
  return {};
}

Pipeline::Pipeline(HashSpec spec, std::size_t height, std::size_t width, Temperature tau)
    : spec_(spec),
      tau_(tau.value),
      height_(height),
      width_(width),
      resizer_(height, width, spec.grid_h(), spec.grid_w()) {
  if (spec_.algo == Algo::PHash) dct_.emplace(2 * spec_.side(), spec_.side());
}

std::size_t Pipeline::stage_size(Stage s) const {
  switch (s) {
    case Stage::P0: return height_ * width_;
    case Stage::P1: return spec_.grid_h() * spec_.grid_w();
    case Stage::P2:
    case Stage::P3:
    case Stage::SoftBits: return spec_.bits;
  }
  return 0;
}

StageOutputs Pipeline::forward(const RgbImage& img, std::optional<double> frozen_threshold) const {
  if (img.height() != height_ || img.width() != width_) throw std::invalid_argument("pipeline: image shape mismatch");
  StageOutputs out;
  out.luma = to_luma(img);
  out.grid = resizer_.forward(out.luma);
  auto t = detail::transform_grid(out.grid, spec_, dct_ ? &*dct_ : nullptr,
                                  spec_.algo == Algo::PHash ? frozen_threshold : std::nullopt);
  out.transform = std::move(t.values);
  out.threshold = t.threshold;
  out.logits = out.transform.values();
  out.soft_bits.resize(out.logits.size());
  for (std::size_t j = 0; j < out.logits.size(); ++j) out.soft_bits[j] = 1.0 / (1.0 + std::exp(-tau_ * out.logits[j]));
  return out;
}

RgbImage Pipeline::backward(const StageOutputs& fwd, Stage stage, std::span<const double> upstream) const {
  if (upstream.size() != stage_size(stage)) throw std::invalid_argument("vjp: upstream shape does not match stage");
  const std::size_t s = spec_.side();
  std::vector<double> g(upstream.begin(), upstream.end());

  if (stage == Stage::SoftBits) {
    if (fwd.soft_bits.size() != g.size()) throw std::invalid_argument("vjp: forward outputs do not match pipeline");
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double sg = fwd.soft_bits[j];
      g[j] *= tau_ * sg * (1.0 - sg);
    }
    stage = Stage::P3;
  }
  // P3 is P2 flattened row-major.
  if (stage == Stage::P3) stage = Stage::P2;

  GrayImage luma_grad;
  if (stage == Stage::P0) {
    luma_grad = GrayImage(height_, width_, std::move(g));
  } else {
    GrayImage grid_grad(spec_.grid_h(), spec_.grid_w(), 0.0);
    if (stage == Stage::P1) {
      grid_grad.values() = std::move(g);
    } else {
      switch (spec_.algo) {
        case Algo::AHash: {
          double mean = 0.0;
          for (double v : g) mean += v;
          mean /= static_cast<double>(g.size());
          for (std::size_t j = 0; j < g.size(); ++j) grid_grad.data()[j] = g[j] - mean;
          break;
        }
        case Algo::DHash:
          for (std::size_t r = 0; r < s; ++r) {
            for (std::size_t c = 0; c < s; ++c) {
              const double v = g[r * s + c];
              grid_grad.at(r, c + 1) += v;
              grid_grad.at(r, c) -= v;
            }
          }
          break;
        case Algo::PHash:
          // Median held constant: only the DCT block contributes.
          grid_grad.values() = dct_->adjoint(g);
          break;
      }
    }
    luma_grad = resizer_.adjoint(grid_grad);
  }

  RgbImage out(height_, width_);
  auto dst = out.data();
  const auto lg = luma_grad.data();
  for (std::size_t i = 0; i < lg.size(); ++i) {
    dst[3 * i] = kLumaR * lg[i];
    dst[3 * i + 1] = kLumaG * lg[i];
    dst[3 * i + 2] = kLumaB * lg[i];
  }
  return out;
}

StageOutputs forward_stages(const RgbImage& img, const HashSpec& spec, Temperature tau) {
  return Pipeline(spec, img.height(), img.width(), tau).forward(img);
}

RgbImage vjp_to_source(const RgbImage& img, const HashSpec& spec, Temperature tau, Stage stage,
                       std::span<const double> upstream) {
  const Pipeline pipe(spec, img.height(), img.width(), tau);
  return pipe.backward(pipe.forward(img), stage, upstream);
}

}  // namespace hashcoll
