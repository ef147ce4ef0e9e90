#include "hashcoll/report.hpp"

#include <json.hpp>
#include <sstream>

#include "common/fileutil.hpp"

namespace hashcoll {

using nlohmann::json;

AttackReport make_report(const std::string& source, const std::string& target, const std::string& adversarial,
                         const HashSpec& spec, const AttackConfig& cfg, const AttackResult& res) {
  AttackReport r;
  r.source = source;
  r.target = target;
  r.adversarial = adversarial;
  r.spec = spec;
  r.config = cfg;
  r.iters = res.iters;
  r.success_float = res.success_float;
  r.success_quantized = res.success_quantized;
  r.final_hamming = res.final_hamming;
  r.r_l2 = res.r_l2;
  r.r_rms = res.r_rms;
  r.r_linf = res.r_linf;
  r.ssim = res.ssim;
  r.stage_residual = res.stage_residual;
  return r;
}

std::string report_to_json(const AttackReport& r) {
  json splits = json::array();
  for (Stage s : r.config.splits) splits.push_back(std::string(stage_name(s)));
  json j = {
      {"source", r.source},
      {"target", r.target},
      {"adversarial", r.adversarial},
      {"algo", std::string(algo_name(r.spec.algo))},
      {"bits", r.spec.bits},
      {"objective", std::string(objective_name(r.config.objective))},
      {"splits", splits},
      {"lr", r.config.lr},
      {"lr_units", "8-bit intensity steps per iteration"},
      {"betas", {r.config.beta1, r.config.beta2}},
      {"c", r.config.c},
      {"delta", r.config.delta},
      {"tau", r.config.tau},
      {"d", r.config.d},
      {"max_iters", r.config.max_iters},
      {"seed", r.config.seed},
      {"lr_decay", r.config.lr_decay},
      {"stage_tol", r.config.stage_tol ? json(*r.config.stage_tol) : json(nullptr)},
      {"iters", r.iters},
      {"success_float", r.success_float},
      {"success_quantized", r.success_quantized},
      {"final_hamming", r.final_hamming},
      {"r_l2", r.r_l2},
      {"r_rms", r.r_rms},
      {"r_linf", r.r_linf},
      {"l2_convention", "r_l2 = Euclidean norm over all h*w*3 values in [0,1]; r_rms = r_l2 / sqrt(h*w*3)"},
      {"ssim", r.ssim},
      {"stage_residual", r.stage_residual},
  };
  return j.dump(2) + "\n";
}

AttackReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  AttackReport r;
  r.source = j.at("source").get<std::string>();
  r.target = j.at("target").get<std::string>();
  r.adversarial = j.at("adversarial").get<std::string>();
  r.spec = HashSpec(parse_algo(j.at("algo").get<std::string>()), j.at("bits").get<std::size_t>());
  r.config.objective = parse_objective(j.at("objective").get<std::string>());
  for (const auto& s : j.at("splits")) r.config.splits.push_back(parse_stage(s.get<std::string>()));
  r.config.lr = j.at("lr").get<double>();
  if (j.contains("betas")) {
    r.config.beta1 = j["betas"].at(0).get<double>();
    r.config.beta2 = j["betas"].at(1).get<double>();
  }
  r.config.c = j.at("c").get<double>();
  r.config.delta = j.at("delta").get<double>();
  r.config.tau = j.at("tau").get<double>();
  r.config.d = j.at("d").get<std::size_t>();
  r.config.max_iters = j.value("max_iters", r.config.max_iters);
  r.config.seed = j.value("seed", r.config.seed);
  r.config.lr_decay = j.value("lr_decay", 1.0);
  if (j.contains("stage_tol") && !j["stage_tol"].is_null()) r.config.stage_tol = j["stage_tol"].get<double>();
  r.iters = j.at("iters").get<std::size_t>();
  r.success_float = j.at("success_float").get<bool>();
  r.success_quantized = j.at("success_quantized").get<bool>();
  r.final_hamming = j.at("final_hamming").get<std::size_t>();
  r.r_l2 = j.at("r_l2").get<double>();
  r.r_rms = j.value("r_rms", 0.0);
  r.r_linf = j.at("r_linf").get<double>();
  r.ssim = j.at("ssim").get<double>();
  r.stage_residual = j.value("stage_residual", 0.0);
  return r;
}

void write_report(const std::filesystem::path& path, const AttackReport& r) {
  write_text_atomic(path, report_to_json(r));
}

AttackReport read_report(const std::filesystem::path& path) { return report_from_json(read_text_file(path)); }

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "iter,loss,hamming\n";
  for (const auto& t : trace) os << t.iter << ',' << t.loss << ',' << t.hamming << '\n';
  write_text_atomic(path, os.str());
}

}  // namespace hashcoll
