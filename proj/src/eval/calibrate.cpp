#include <algorithm>
#include <fstream>
#include <sstream>

#include "hashcoll/eval.hpp"

namespace hashcoll {

std::optional<Calibration> calibrate_threshold(const std::vector<std::size_t>& genuine,
                                               const std::vector<std::size_t>& impostor, double target,
                                               std::size_t max_distance) {
  if (genuine.empty() || impostor.empty()) throw std::invalid_argument("calibration needs genuine and impostor samples");
  if (!(target > 0.0 && target <= 1.0)) throw std::invalid_argument("precision target must lie in (0, 1]");

  // Histograms, then cumulative counts at each t.
  std::vector<std::size_t> g(max_distance + 1, 0), im(max_distance + 1, 0);
  for (auto d : genuine) ++g[std::min(d, max_distance)];
  for (auto d : impostor) ++im[std::min(d, max_distance)];

  std::optional<Calibration> best;
  std::size_t cg = 0, ci = 0;
  for (std::size_t t = 0; t <= max_distance; ++t) {
    cg += g[t];
    ci += im[t];
    const double p = cg + ci == 0 ? 1.0 : static_cast<double>(cg) / static_cast<double>(cg + ci);
    if (p >= target) best = Calibration{t, p};
  }
  return best;
}

std::string baseline_csv(const HashSpec& spec, const std::vector<AccuracyRow>& rows, bool header) {
  std::ostringstream os;
  if (header) os << "algo,bits,aug,k,accuracy\n";
  for (const auto& r : rows) {
    os << algo_name(spec.algo) << ',' << spec.bits << ',' << r.aug << ',' << r.k << ',' << r.accuracy << '\n';
  }
  return os.str();
}

std::string collision_csv(const std::vector<std::pair<HashSpec, double>>& rows) {
  std::ostringstream os;
  os << "algo,bits,rate\n";
  for (const auto& [spec, rate] : rows) os << algo_name(spec.algo) << ',' << spec.bits << ',' << rate << '\n';
  return os.str();
}

std::string calibration_csv(const std::vector<std::pair<HashSpec, Calibration>>& rows, double precision) {
  std::ostringstream os;
  os << "algo,bits,precision,threshold\n";
  for (const auto& [spec, cal] : rows) {
    os << algo_name(spec.algo) << ',' << spec.bits << ',' << precision << ',' << cal.threshold << '\n';
  }
  return os.str();
}

std::map<std::string, std::size_t> read_thresholds_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open thresholds file " + path.string());
  std::map<std::string, std::size_t> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("algo,", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::string algo, bits, precision, threshold;
    if (!std::getline(ss, algo, ',') || !std::getline(ss, bits, ',') || !std::getline(ss, precision, ',') ||
        !std::getline(ss, threshold, ',')) {
      throw std::runtime_error("malformed thresholds row: " + line);
    }
    out[HashSpec(parse_algo(algo), std::stoul(bits)).name()] = std::stoul(threshold);
  }
  return out;
}

}  // namespace hashcoll
