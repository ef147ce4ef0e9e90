#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hashcoll/attack.hpp"

namespace hashcoll {

/// On-disk summary of one attack run. Paths are stored as given; relative paths are
/// resolved against the report's directory when read back.
struct AttackReport {
  std::string source;
  std::string target;
  std::string adversarial;
  HashSpec spec;
  AttackConfig config;
  std::size_t iters = 0;
  bool success_float = false;
  bool success_quantized = false;
  std::size_t final_hamming = 0;
  double r_l2 = 0.0;
  double r_rms = 0.0;
  double r_linf = 0.0;
  double ssim = 1.0;
  double stage_residual = 0.0;
};

AttackReport make_report(const std::string& source, const std::string& target, const std::string& adversarial,
                         const HashSpec& spec, const AttackConfig& cfg, const AttackResult& res);

std::string report_to_json(const AttackReport& r);
AttackReport report_from_json(const std::string& text);

void write_report(const std::filesystem::path& path, const AttackReport& r);
AttackReport read_report(const std::filesystem::path& path);

/// iter,loss,hamming
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);

}  // namespace hashcoll
