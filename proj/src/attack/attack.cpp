#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hashcoll/attack.hpp"

namespace hashcoll {

std::string_view objective_name(Objective o) {
  switch (o) {
    case Objective::HashL2: return "hash_l2";
    case Objective::Hinge: return "hinge";
    case Objective::Interior: return "interior";
  }
  return "?";
}

Objective parse_objective(std::string_view name) {
  if (name == "hash_l2" || name == "l2") return Objective::HashL2;
  if (name == "hinge") return Objective::Hinge;
  if (name == "interior") return Objective::Interior;
  throw std::invalid_argument("unknown objective: " + std::string(name));
}

void AttackConfig::validate() const {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 0.5)");
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (!(c >= 0.0)) throw std::invalid_argument("c must be non-negative");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("Adam betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw std::invalid_argument("lr_decay must lie in (0, 1]");
  if (stage_tol && !(*stage_tol >= 0.0)) throw std::invalid_argument("stage_tol must be non-negative");
  if (objective == Objective::Interior) {
    if (splits.empty()) throw std::invalid_argument("interior objective needs at least one split");
    for (Stage s : splits) {
      if (s != Stage::P1 && s != Stage::P2 && s != Stage::P3) {
        throw std::invalid_argument("unknown split id: " + std::string(stage_name(s)));
      }
    }
  }
}

std::string AttackConfig::objective_label() const {
  if (objective != Objective::Interior) return std::string(objective_name(objective));
  std::string out;
  for (Stage s : splits) {
    if (!out.empty()) out += "+";
    out += stage_name(s);
  }
  return out;
}

namespace {

double split_residual(const StageOutputs& fwd, const AttackTarget& target, std::span<const Stage> splits) {
  double worst = 0.0;
  for (Stage st : splits) {
    const auto a = fwd.stage(st);
    const auto b = target.stages.stage(st);
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  }
  return worst;
}

}  // namespace

AttackResult run_attack(const RgbImage& source, const RgbImage& target, const HashSpec& spec,
                        const AttackConfig& cfg) {
  cfg.validate();
  if (source.empty() || target.empty()) throw std::invalid_argument("attack images must be non-empty");
  const Temperature tau(cfg.tau);
  const Pipeline pipe(spec, source.height(), source.width(), tau);
  const AttackTarget tgt = prepare_target(target, spec, tau);
  const bool interior = cfg.objective == Objective::Interior;

  AttackResult res;
  RgbImage adv = source;
  StageOutputs fwd = pipe.forward(adv);

  auto collided = [&](const StageOutputs& f, std::size_t& ham, double& resid) {
    ham = hamming(f.bits(), tgt.bits);
    resid = interior ? split_residual(f, tgt, cfg.splits) : 0.0;
    if (ham > cfg.d) return false;
    return !(interior && cfg.stage_tol && resid > *cfg.stage_tol);
  };

  std::size_t ham = 0;
  double resid = 0.0;
  bool done = collided(fwd, ham, resid);

  const std::size_t m = adv.size();
  std::vector<double> m1(m, 0.0), m2(m, 0.0);
  double b1t = 1.0, b2t = 1.0, lr = cfg.lr;
  std::size_t t = 0;
  while (true) {
    LossGrad lg = evaluate_objective(pipe, fwd, adv, source, tgt, cfg);
    res.loss_trace.push_back({t, lg.loss, ham});
    if (done || t >= cfg.max_iters) break;

    ++t;
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    const double step = lr / kIntensityLevels;
    auto x = adv.data();
    const auto g = lg.grad.data();
    for (std::size_t i = 0; i < m; ++i) {
      const double gi = g[i];
      m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * gi;
      m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * gi * gi;
      const double mhat = m1[i] / (1.0 - b1t);
      const double vhat = m2[i] / (1.0 - b2t);
      x[i] = std::clamp(x[i] - step * mhat / (std::sqrt(vhat) + cfg.eps), 0.0, 1.0);
    }
    lr *= cfg.lr_decay;
    fwd = pipe.forward(adv);
    done = collided(fwd, ham, resid);
  }

  res.iters = t;
  res.final_hamming = ham;
  res.success_float = ham <= cfg.d;
  res.stage_residual = resid;

  const auto a = adv.data();
  const auto s = source.data();
  double sq = 0.0, linf = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = a[i] - s[i];
    sq += r * r;
    linf = std::max(linf, std::abs(r));
  }
  res.r_l2 = std::sqrt(sq);
  res.r_rms = std::sqrt(sq / static_cast<double>(m));
  res.r_linf = linf;

  const RgbImage q = quantize(adv, 255);
  res.quantized_hamming = hamming(hash_image(q, spec), tgt.bits);
  res.success_quantized = res.quantized_hamming <= cfg.d;
  res.ssim = ssim(to_luma(source), to_luma(adv));
  res.adversarial = std::move(adv);
  return res;
}

}  // namespace hashcoll
