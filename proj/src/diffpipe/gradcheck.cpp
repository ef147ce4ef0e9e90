#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hashcoll/diffpipe.hpp"

namespace hashcoll {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double finite_diff_check(const RgbImage& img, const HashSpec& spec, Temperature tau, Stage stage, int trials,
                         double step, std::uint64_t seed) {
  if (!(step > 0.0)) throw std::invalid_argument("finite difference step must be positive");
  const Pipeline pipe(spec, img.height(), img.width(), tau);
  const StageOutputs base = pipe.forward(img);
  const double frozen = base.threshold;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> u(pipe.stage_size(stage));
    for (double& v : u) v = normal(rng);
    const RgbImage g = pipe.backward(base, stage, u);

    RgbImage probe = img;
    auto x = probe.data();
    double diff2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double orig = x[i];
      x[i] = orig + step;
      const double fp = dot(u, pipe.forward(probe, frozen).stage(stage));
      x[i] = orig - step;
      const double fm = dot(u, pipe.forward(probe, frozen).stage(stage));
      x[i] = orig;
      const double fd = (fp - fm) / (2.0 * step);
      const double e = g.data()[i] - fd;
      diff2 += e * e;
      ref2 += fd * fd;
    }
    worst = std::max(worst, std::sqrt(diff2) / std::max(std::sqrt(ref2), 1e-12));
  }
  return worst;
}

}  // namespace hashcoll
