#include <algorithm>
#include <sstream>

#include "hashcoll/eval.hpp"

namespace hashcoll {

std::vector<LoadedReport> load_reports(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : dir / path;
  };
  std::vector<LoadedReport> out;
  for (const auto& f : files) {
    LoadedReport lr;
    lr.report = read_report(f);
    lr.adversarial = resolve(lr.report.adversarial);
    lr.target = resolve(lr.report.target);
    if (!std::filesystem::exists(lr.adversarial)) throw std::runtime_error("missing adversarial image " + lr.adversarial.string());
    if (!std::filesystem::exists(lr.target)) throw std::runtime_error("missing target image " + lr.target.string());
    out.push_back(std::move(lr));
  }
  return out;
}

std::vector<TransferCell> transfer_matrix(const std::vector<LoadedReport>& reports,
                                          const std::vector<HashSpec>& eval_specs,
                                          const std::map<std::string, std::size_t>& thresholds) {
  struct Group {
    HashSpec spec;
    std::string split;
    std::vector<std::size_t> members;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i].report;
    const std::string split = r.config.objective_label();
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.spec == r.spec && g.split == split; });
    if (it == groups.end()) {
      groups.push_back({r.spec, split, {}});
      it = groups.end() - 1;
    }
    it->members.push_back(i);
  }

  // hamming[report][eval spec]
  std::vector<std::vector<std::size_t>> dist(reports.size(), std::vector<std::size_t>(eval_specs.size()));
  std::vector<std::string> errors(reports.size());
  const auto n = static_cast<long>(reports.size());
#pragma omp parallel for schedule(dynamic, 2)
  for (long i = 0; i < n; ++i) {
    try {
      const RgbImage adv = load_image(reports[i].adversarial);
      const RgbImage tgt = load_image(reports[i].target);
      for (std::size_t e = 0; e < eval_specs.size(); ++e) {
        dist[i][e] = hamming(hash_image(adv, eval_specs[e]), hash_image(tgt, eval_specs[e]));
      }
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error("transfer: " + e);
  }

  std::vector<TransferCell> cells;
  for (const auto& g : groups) {
    for (std::size_t e = 0; e < eval_specs.size(); ++e) {
      const auto it = thresholds.find(eval_specs[e].name());
      const std::size_t thr = it == thresholds.end() ? 0 : it->second;
      std::size_t hits = 0;
      for (std::size_t i : g.members) hits += dist[i][e] <= thr;
      cells.push_back({g.spec, g.split, eval_specs[e], thr,
                       static_cast<double>(hits) / static_cast<double>(g.members.size()), g.members.size()});
    }
  }
  return cells;
}

std::string transfer_csv(const std::vector<TransferCell>& cells) {
  std::ostringstream os;
  os << "attack_algo,attack_bits,split,eval_algo,eval_bits,threshold,success_rate,n\n";
  for (const auto& c : cells) {
    os << algo_name(c.attack_spec.algo) << ',' << c.attack_spec.bits << ',' << c.split << ','
       << algo_name(c.eval_spec.algo) << ',' << c.eval_spec.bits << ',' << c.threshold << ',' << c.success_rate << ','
       << c.n << '\n';
  }
  return os.str();
}

}  // namespace hashcoll
