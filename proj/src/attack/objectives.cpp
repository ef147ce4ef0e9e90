#include <cmath>
#include <stdexcept>

#include "hashcoll/attack.hpp"

namespace hashcoll {

namespace {

// Adds c * ||adv - source||^2 and its gradient.
void add_penalty(LossGrad& lg, const RgbImage& adv, const RgbImage& source, double c) {
  if (c == 0.0) return;
  const auto a = adv.data();
  const auto s = source.data();
  auto g = lg.grad.data();
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a[i] - s[i];
    sq += r * r;
    g[i] += 2.0 * c * r;
  }
  lg.loss += c * sq;
}

void add_into(RgbImage& acc, const RgbImage& g) {
  auto a = acc.data();
  const auto b = g.data();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

}  // namespace

AttackTarget prepare_target(const RgbImage& target, const HashSpec& spec, Temperature tau) {
  const Pipeline pipe(spec, target.height(), target.width(), tau);
  AttackTarget t;
  t.stages = pipe.forward(target);
  t.bits = t.stages.bits();
  return t;
}

LossGrad objective_hash_l2(const Pipeline& pipe, const StageOutputs& fwd, const RgbImage& adv, const RgbImage& source,
                           const AttackTarget& target, double c) {
  const std::size_t k = fwd.soft_bits.size();
  std::vector<double> up(k);
  LossGrad lg;
  for (std::size_t j = 0; j < k; ++j) {
    const double diff = fwd.soft_bits[j] - (target.bits.get(j) ? 1.0 : 0.0);
    lg.loss += diff * diff;
    up[j] = 2.0 * diff;
  }
  lg.grad = pipe.backward(fwd, Stage::SoftBits, up);
  add_penalty(lg, adv, source, c);
  return lg;
}

LossGrad objective_hinge(const Pipeline& pipe, const StageOutputs& fwd, const RgbImage& adv, const RgbImage& source,
                         const AttackTarget& target, double c, double delta) {
  const std::size_t k = fwd.soft_bits.size();
  std::vector<double> up(k, 0.0);
  LossGrad lg;
  for (std::size_t j = 0; j < k; ++j) {
    const double want = target.bits.get(j) ? 1.0 : 0.0;
    const double gap = want - fwd.soft_bits[j];
    const double excess = std::abs(gap) - delta;
    if (excess > 0.0) {
      lg.loss += excess;
      up[j] = gap > 0.0 ? -1.0 : 1.0;
    }
  }
  lg.grad = pipe.backward(fwd, Stage::SoftBits, up);
  add_penalty(lg, adv, source, c);
  return lg;
}

LossGrad objective_interior(const Pipeline& pipe, const StageOutputs& fwd, const RgbImage& adv,
                            const RgbImage& source, const AttackTarget& target, std::span<const Stage> splits,
                            double c) {
  if (splits.empty()) throw std::invalid_argument("interior objective needs at least one split");
  LossGrad lg;
  lg.grad = RgbImage(adv.height(), adv.width(), 0.0);
  for (Stage st : splits) {
    if (st != Stage::P1 && st != Stage::P2 && st != Stage::P3) {
      throw std::invalid_argument("unknown split id: " + std::string(stage_name(st)));
    }
    const auto mine = fwd.stage(st);
    const auto theirs = target.stages.stage(st);
    if (mine.size() != theirs.size()) throw std::invalid_argument("split shapes differ between source and target");
    std::vector<double> up(mine.size());
    for (std::size_t j = 0; j < mine.size(); ++j) {
      const double diff = mine[j] - theirs[j];
      lg.loss += diff * diff;
      up[j] = 2.0 * diff;
    }
    add_into(lg.grad, pipe.backward(fwd, st, up));
  }
  add_penalty(lg, adv, source, c);
  return lg;
}

LossGrad evaluate_objective(const Pipeline& pipe, const StageOutputs& fwd, const RgbImage& adv, const RgbImage& source,
                            const AttackTarget& target, const AttackConfig& cfg) {
  switch (cfg.objective) {
    case Objective::HashL2: return objective_hash_l2(pipe, fwd, adv, source, target, cfg.c);
    case Objective::Hinge: return objective_hinge(pipe, fwd, adv, source, target, cfg.c, cfg.delta);
    case Objective::Interior: return objective_interior(pipe, fwd, adv, source, target, cfg.splits, cfg.c);
  }
  throw std::invalid_argument("unknown objective");
}

}  // namespace hashcoll
