#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hashcoll/diffpipe.hpp"
#include "hashcoll/hashes.hpp"
#include "hashcoll/image.hpp"

namespace hashcoll {

enum class Objective : std::uint8_t {
  HashL2,    // ||soft_bits(x+r) - h(y)||^2 + c||r||^2
  Hinge,     // sum_j max(0, |h_j(y) - soft_j(x+r)| - delta) + c||r||^2
  Interior,  // sum_{i in splits} ||stage_i(x+r) - stage_i(y)||^2 + c||r||^2
};

std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view name);

/// Pixel intensities per unit of the [0,1] image. The Adam learning rate is expressed in
/// these 8-bit steps, so lr = 5 moves a pixel by at most about 5/255 per iteration.
inline constexpr double kIntensityLevels = 255.0;

struct AttackConfig {
  Objective objective = Objective::Hinge;
  std::vector<Stage> splits;  // Interior only, subset of {P1, P2, P3}
  double lr = 5.0;
  double beta1 = 0.1;
  double beta2 = 0.1;
  double eps = 1e-8;
  double c = 0.001;
  double delta = 0.45;
  double tau = 50.0;
  std::size_t d = 0;
  std::size_t max_iters = 2000;
  std::uint64_t seed = 0;
  /// Per-iteration multiplicative learning-rate decay; 1 keeps lr fixed.
  double lr_decay = 1.0;
  /// When set, Interior attacks also require every split residual (max abs) to fall
  /// below this before stopping.
  std::optional<double> stage_tol;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  /// "hinge", "hash_l2", or "P1+P3" style split list for interior attacks.
  std::string objective_label() const;
};

struct TraceRow {
  std::size_t iter;
  double loss;
  std::size_t hamming;
};

struct AttackResult {
  RgbImage adversarial;
  double r_l2 = 0.0;    // ||adv - source||_2 over all h*w*3 values
  double r_rms = 0.0;   // r_l2 / sqrt(h*w*3)
  double r_linf = 0.0;
  std::size_t iters = 0;
  bool success_float = false;
  bool success_quantized = false;  // after rounding to 8-bit
  std::size_t final_hamming = 0;
  std::size_t quantized_hamming = 0;
  double ssim = 1.0;               // luma of adversarial vs luma of source
  double stage_residual = 0.0;     // max abs split residual (Interior only)
  std::vector<TraceRow> loss_trace;
};

/// Loss and gradient with respect to the adversarial image x + r.
struct LossGrad {
  double loss = 0.0;
  RgbImage grad;
};

/// Precomputed target-side quantities for one (spec, target) pair.
struct AttackTarget {
  BitHash bits;
  StageOutputs stages;
};

AttackTarget prepare_target(const RgbImage& target, const HashSpec& spec, Temperature tau);

/// Individual objectives. `fwd` must be pipe.forward(adv). `source` is x, so r = adv - source.
LossGrad objective_hash_l2(const Pipeline& pipe, const StageOutputs& fwd, const RgbImage& adv, const RgbImage& source,
                           const AttackTarget& target, double c);
LossGrad objective_hinge(const Pipeline& pipe, const StageOutputs& fwd, const RgbImage& adv, const RgbImage& source,
                         const AttackTarget& target, double c, double delta);
LossGrad objective_interior(const Pipeline& pipe, const StageOutputs& fwd, const RgbImage& adv,
                            const RgbImage& source, const AttackTarget& target, std::span<const Stage> splits,
                            double c);

/// Dispatches on cfg.objective.
LossGrad evaluate_objective(const Pipeline& pipe, const StageOutputs& fwd, const RgbImage& adv, const RgbImage& source,
                            const AttackTarget& target, const AttackConfig& cfg);

/// Adam on r with a [0,1] box projection after every step. Stops on the first iterate
/// whose hard hash is within cfg.d of the target's.
AttackResult run_attack(const RgbImage& source, const RgbImage& target, const HashSpec& spec,
                        const AttackConfig& cfg);

/// Mean SSIM over 8x8 windows with stride 1 (uniform weights, population statistics),
/// C1 = 0.01^2, C2 = 0.03^2. Windows shrink to the image size for images under 8 px.
double ssim(const GrayImage& a, const GrayImage& b);

}  // namespace hashcoll
