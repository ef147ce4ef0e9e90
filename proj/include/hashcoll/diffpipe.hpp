#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hashcoll/dct.hpp"
#include "hashcoll/hashes.hpp"
#include "hashcoll/image.hpp"
#include "hashcoll/resample.hpp"

namespace hashcoll {

/// Split points of a shallow hash pipeline, in forward order.
enum class Stage : std::uint8_t {
  P0 = 0,        // luma at source resolution
  P1 = 1,        // resized grid
  P2 = 2,        // algorithm transform (threshold subtracted)
  P3 = 3,        // pre-binarization logits, flattened
  SoftBits = 4,  // sigmoid(tau * P3)
};

std::string_view stage_name(Stage s);
Stage parse_stage(std::string_view name);

/// Sigmoid input scale. Logits of a [0,1] image are O(0.01-0.1).
struct Temperature {
  double value = 50.0;

  constexpr Temperature() = default;
  explicit Temperature(double v);
};

struct StageOutputs {
  GrayImage luma;      // P0
  GrayImage grid;      // P1
  GrayImage transform; // P2
  std::vector<double> logits;     // P3
  std::vector<double> soft_bits;  // sigmoid(tau * P3)
  double threshold = 0.0;         // mean (aHash), median (pHash), 0 (dHash)

  /// The hard hash: logit > 0.
  BitHash bits() const;
  /// Flattened copy of the named stage.
  std::vector<double> stage(Stage s) const;
};

/// Differentiable relaxation of one shallow hash for a fixed source resolution. Holds the
/// resampling operators and DCT basis so repeated forward/backward passes reuse them.
class Pipeline {
 public:
  Pipeline(HashSpec spec, std::size_t height, std::size_t width, Temperature tau = {});

  const HashSpec& spec() const { return spec_; }
  double tau() const { return tau_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

  /// Forward pass. For pHash the median is normally recomputed from the block; passing
  /// `frozen_threshold` holds it fixed instead, which is the map that backward()
  /// differentiates.
  StageOutputs forward(const RgbImage& img, std::optional<double> frozen_threshold = std::nullopt) const;

  /// Vector-Jacobian product from `stage` back to the RGB source. `fwd` must come from
  /// forward() on the same image; only the soft bits are read from it.
  RgbImage backward(const StageOutputs& fwd, Stage stage, std::span<const double> upstream) const;

  /// Element count of a stage for this source geometry.
  std::size_t stage_size(Stage s) const;

 private:
  HashSpec spec_;
  double tau_;
  std::size_t height_;
  std::size_t width_;
  Resizer resizer_;
  std::optional<DctBlock> dct_;
};

StageOutputs forward_stages(const RgbImage& img, const HashSpec& spec, Temperature tau = {});

RgbImage vjp_to_source(const RgbImage& img, const HashSpec& spec, Temperature tau, Stage stage,
                       std::span<const double> upstream);

/// Compares backward() against central differences of <u, stage(x)> for `trials` random
/// upstream vectors u, using the frozen-median map for pHash. Returns the worst
/// relative error ||g_vjp - g_fd||_2 / max(||g_fd||_2, 1e-12).
double finite_diff_check(const RgbImage& img, const HashSpec& spec, Temperature tau, Stage stage, int trials,
                         double step, std::uint64_t seed = 1);

}  // namespace hashcoll
