// Command-line front end: hashing, attacks, banks, baselines, calibration, transfer.
//
// Exit codes: 0 success, 1 usage or input error, 2 attack ran but did not collide,
// 3 no threshold reaches the requested precision.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hashcoll/attack.hpp"
#include "hashcoll/eval.hpp"
#include "hashcoll/hashes.hpp"
#include "hashcoll/pca.hpp"
#include "hashcoll/report.hpp"

namespace hc = hashcoll;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoCollision = 2;
constexpr int kExitUncalibratable = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<hc::HashSpec> parse_specs(const std::string& s) {
  std::vector<hc::HashSpec> out;
  for (const auto& item : split_list(s)) out.push_back(hc::HashSpec::parse(item));
  if (out.empty()) throw UsageError("no hash specs given");
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    std::ofstream probe;  // create parent dirs via the atomic writer
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    auto tmp = p;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << text;
    }
    std::filesystem::rename(tmp, p);
  }
}

// ---- flat key=value config -------------------------------------------------

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Expands --config FILE into explicit flags placed before the user's own flags, skipping
// keys that were also given on the command line. Unknown keys are rejected.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
  if (args.empty()) return args;
  CLI::App* sub = nullptr;
  for (auto* s : app.get_subcommands({})) {
    if (s->get_name() == args.front()) sub = s;
  }
  if (sub == nullptr) return args;
  // Descend into nested subcommands (bank build, bank query).
  std::size_t lead = 1;
  while (lead < args.size()) {
    CLI::App* child = nullptr;
    for (auto* s : sub->get_subcommands({})) {
      if (s->get_name() == args[lead]) child = s;
    }
    if (child == nullptr) break;
    sub = child;
    ++lead;
  }
  std::string cfg_path;
  std::vector<std::string> rest;
  std::set<std::string> given;
  for (std::size_t i = lead; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      cfg_path = args[++i];
      continue;
    }
    if (a.rfind("--config=", 0) == 0) {
      cfg_path = a.substr(9);
      continue;
    }
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    rest.push_back(a);
  }
  if (cfg_path.empty()) return args;
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(lead));
  for (const auto& [key, value] : read_config(cfg_path)) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("unknown config key '" + key + "' for " + sub->get_name());
    if (given.contains(key)) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1") out.push_back("--" + key);
      continue;
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// ---- subcommands ------------------------------------------------------------------

struct HashArgs {
  std::string image;
  std::string algo = "ahash";
  std::size_t bits = 64;
};

int cmd_hash(const HashArgs& a) {
  const hc::HashSpec spec(hc::parse_algo(a.algo), a.bits);
  std::cout << hc::hash_image(hc::load_image(a.image), spec).to_hex() << "\n";
  return kExitOk;
}

struct AttackArgs {
  std::string source, target, algo = "ahash", objective = "hinge", splits, out, report, trace;
  std::size_t bits = 256;
  hc::AttackConfig cfg;
  double stage_tol = -1.0;
};

int cmd_attack(AttackArgs a) {
  const hc::HashSpec spec(hc::parse_algo(a.algo), a.bits);
  a.cfg.objective = hc::parse_objective(a.objective);
  for (const auto& s : split_list(a.splits, '+')) {
    for (const auto& t : split_list(s, ',')) a.cfg.splits.push_back(hc::parse_stage(t));
  }
  if (a.stage_tol >= 0.0) a.cfg.stage_tol = a.stage_tol;
  a.cfg.validate();
  if (a.out.empty() || a.report.empty()) throw UsageError("--out and --report are required");

  const auto src = hc::load_image(a.source);
  const auto tgt = hc::load_image(a.target);
  const auto res = hc::run_attack(src, tgt, spec, a.cfg);

  namespace fs = std::filesystem;
  hc::save_png(a.out, res.adversarial, 16);
  // Store paths relative to the report so a directory of runs can be moved as a unit.
  const fs::path report_dir = fs::absolute(fs::path(a.report)).parent_path();
  auto rel = [&](const std::string& p) { return fs::relative(fs::absolute(p), report_dir).string(); };
  hc::write_report(a.report, hc::make_report(rel(a.source), rel(a.target), rel(a.out), spec, a.cfg, res));
  if (!a.trace.empty()) hc::write_trace_csv(a.trace, res.loss_trace);
  std::cerr << (res.success_float ? "collision" : "no collision") << " after " << res.iters
            << " iterations, hamming " << res.final_hamming << ", r_rms " << res.r_rms << "\n";
  return res.success_float ? kExitOk : kExitNoCollision;
}

struct BankArgs {
  std::string dir, out, bank, image, algo = "ahash";
  std::size_t bits = 64, k = 5;
};

int cmd_bank_build(const BankArgs& a) {
  const hc::HashSpec spec(hc::parse_algo(a.algo), a.bits);
  const auto bank = hc::build_bank(std::filesystem::path(a.dir), spec);
  hc::save_bank(a.out, bank);
  std::cerr << "bank " << spec.name() << ": " << bank.size() << " entries, " << bank.skipped.size() << " skipped\n";
  return kExitOk;
}

int cmd_bank_query(const BankArgs& a) {
  const auto bank = hc::load_bank(a.bank);
  const auto probe = hc::hash_image(hc::load_image(a.image), bank.spec());
  for (const auto& n : hc::nn_query(bank, probe, a.k)) std::cout << bank.id(n.index) << " " << n.distance << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string corpus, specs = "ahash_64,ahash_144,ahash_256,dhash_64,dhash_144,dhash_256,phash_64,phash_144,phash_256";
  std::string ks = "1,5,10", baselines, collisions;
  std::uint64_t seed = 0;
};

int cmd_eval(const EvalArgs& a) {
  const auto specs = parse_specs(a.specs);
  std::vector<std::size_t> ks;
  for (const auto& k : split_list(a.ks)) ks.push_back(std::stoul(k));
  const auto corpus = hc::load_corpus(a.corpus);
  if (corpus.empty()) throw UsageError("no decodable images in " + a.corpus);
  std::string base_csv;
  std::vector<std::pair<hc::HashSpec, double>> coll;
  for (const auto& spec : specs) {
    const auto bank = hc::build_bank(corpus, spec);
    base_csv += hc::baseline_csv(spec, hc::topk_accuracy(bank, corpus, hc::default_aug_suite(a.seed), ks),
                                 base_csv.empty());
    coll.emplace_back(spec, hc::collision_rate(bank));
  }
  if (!a.baselines.empty()) write_output(a.baselines, base_csv);
  write_output(a.collisions.empty() ? "-" : a.collisions, hc::collision_csv(coll));
  return kExitOk;
}

struct CalibrateArgs {
  std::string corpus, distractors, specs = "ahash_256,dhash_256,phash_256", out;
  double precision = 0.99;
  std::uint64_t seed = 0;
};

int cmd_calibrate(const CalibrateArgs& a) {
  const auto specs = parse_specs(a.specs);
  const auto members = hc::load_corpus(a.corpus);
  if (members.empty()) throw UsageError("no decodable images in " + a.corpus);
  const auto distractors = a.distractors.empty() ? std::vector<hc::NamedImage>{} : hc::load_corpus(a.distractors);
  std::vector<std::pair<hc::HashSpec, hc::Calibration>> rows;
  bool failed = false;
  for (const auto& spec : specs) {
    const auto bank = hc::build_bank(members, spec);
    const auto samples = hc::collect_nn_distances(bank, members, distractors, hc::default_aug_suite(a.seed));
    if (samples.genuine.empty() || samples.impostor.empty()) {
      std::cerr << spec.name() << ": need both genuine and impostor matches (add --distractors)\n";
      failed = true;
      continue;
    }
    const auto cal = hc::calibrate_threshold(samples.genuine, samples.impostor, a.precision, spec.bits);
    if (!cal) {
      std::cerr << spec.name() << ": uncalibratable at precision " << a.precision << "\n";
      failed = true;
      continue;
    }
    rows.emplace_back(spec, *cal);
  }
  write_output(a.out.empty() ? "-" : a.out, hc::calibration_csv(rows, a.precision));
  return failed ? kExitUncalibratable : kExitOk;
}

struct TransferArgs {
  std::string reports, specs = "ahash_256,dhash_256,phash_256", thresholds, out;
};

int cmd_transfer(const TransferArgs& a) {
  const auto specs = parse_specs(a.specs);
  const auto thresholds =
      a.thresholds.empty() ? std::map<std::string, std::size_t>{} : hc::read_thresholds_csv(a.thresholds);
  const auto reports = hc::load_reports(a.reports);
  if (reports.empty()) throw UsageError("no reports in " + a.reports);
  write_output(a.out.empty() ? "-" : a.out, hc::transfer_csv(hc::transfer_matrix(reports, specs, thresholds)));
  return kExitOk;
}

struct CorpusArgs {
  std::string out;
  std::size_t count = 500, min_side = 64, max_side = 112;
  std::uint64_t seed = 0;
};

int cmd_corpus(const CorpusArgs& a) {
  hc::generate_corpus(a.out, a.count, a.seed, a.min_side, a.max_side);
  return kExitOk;
}

struct PcaArgs {
  std::string embeddings, model, out;
  std::size_t bits = 64;
};

int cmd_pca_fit(const PcaArgs& a) {
  if (a.bits != 64 && a.bits != 128 && a.bits != 256) throw UsageError("PCA hashes are 64, 128 or 256 bits");
  hc::save_pca_model(a.out, hc::pca_fit(hc::read_embeddings_csv(a.embeddings), a.bits));
  return kExitOk;
}

int cmd_pca_hash(const PcaArgs& a) {
  const auto model = hc::load_pca_model(a.model);
  for (const auto& e : hc::read_embeddings_csv(a.embeddings)) std::cout << hc::pca_hash(model, e).to_hex() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perceptual hash collision toolkit"};
  app.require_subcommand(1);

  HashArgs hash_args;
  auto* hash = app.add_subcommand("hash", "Print the hex hash of an image");
  hash->add_option("image", hash_args.image, "PNG or PPM file")->required();
  hash->add_option("--algo", hash_args.algo, "ahash, dhash or phash")->capture_default_str();
  hash->add_option("--bits", hash_args.bits, "64, 144 or 256")->capture_default_str();

  AttackArgs atk;
  auto* attack = app.add_subcommand("attack", "Craft an image whose hash collides with a target's");
  attack->add_option("--source", atk.source, "Image to perturb")->required();
  attack->add_option("--target", atk.target, "Image whose hash to match")->required();
  attack->add_option("--algo", atk.algo, "ahash, dhash or phash")->capture_default_str();
  attack->add_option("--bits", atk.bits, "64, 144 or 256")->capture_default_str();
  attack->add_option("--objective", atk.objective, "hinge, hash_l2 or interior")->capture_default_str();
  attack->add_option("--splits", atk.splits, "Interior split points, e.g. P1 or P1+P3");
  attack->add_option("--lr", atk.cfg.lr, "Adam learning rate in 8-bit intensity steps")->capture_default_str();
  attack->add_option("--beta1", atk.cfg.beta1, "Adam beta1")->capture_default_str();
  attack->add_option("--beta2", atk.cfg.beta2, "Adam beta2")->capture_default_str();
  attack->add_option("--c", atk.cfg.c, "Perturbation penalty weight")->capture_default_str();
  attack->add_option("--delta", atk.cfg.delta, "Hinge margin, 0 < delta < 0.5")->capture_default_str();
  attack->add_option("--tau", atk.cfg.tau, "Sigmoid temperature")->capture_default_str();
  attack->add_option("--d", atk.cfg.d, "Success Hamming threshold")->capture_default_str();
  attack->add_option("--max-iters", atk.cfg.max_iters, "Iteration budget")->capture_default_str();
  attack->add_option("--seed", atk.cfg.seed, "Recorded in the report; Adam itself is deterministic")
      ->capture_default_str();
  attack->add_option("--lr-decay", atk.cfg.lr_decay, "Per-iteration learning-rate multiplier")->capture_default_str();
  attack->add_option("--stage-tol", atk.stage_tol, "Interior: also require split residual below this");
  attack->add_option("--out", atk.out, "Adversarial image, written as 16-bit PNG")->required();
  attack->add_option("--report", atk.report, "JSON report path")->required();
  attack->add_option("--trace", atk.trace, "Optional CSV of iter,loss,hamming");

  BankArgs bank_args;
  auto* bank = app.add_subcommand("bank", "Build or query a hash bank");
  bank->require_subcommand(1);
  auto* bank_build = bank->add_subcommand("build", "Hash every image in a directory");
  bank_build->add_option("--dir", bank_args.dir, "Image directory")->required();
  bank_build->add_option("--algo", bank_args.algo, "ahash, dhash or phash")->capture_default_str();
  bank_build->add_option("--bits", bank_args.bits, "64, 144 or 256")->capture_default_str();
  bank_build->add_option("--out", bank_args.out, "Bank file")->required();
  auto* bank_query = bank->add_subcommand("query", "Nearest neighbours of an image");
  bank_query->add_option("--bank", bank_args.bank, "Bank file")->required();
  bank_query->add_option("--image", bank_args.image, "Probe image")->required();
  bank_query->add_option("--k", bank_args.k, "Neighbours to print")->capture_default_str();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Augmented nearest-neighbour accuracy and incidental collision rates");
  eval->add_option("--corpus", eval_args.corpus, "Image directory")->required();
  eval->add_option("--specs", eval_args.specs, "Comma-separated hash specs")->capture_default_str();
  eval->add_option("--k", eval_args.ks, "Comma-separated k values")->capture_default_str();
  eval->add_option("--seed", eval_args.seed, "Augmentation seed")->capture_default_str();
  eval->add_option("--baselines", eval_args.baselines, "CSV: algo,bits,aug,k,accuracy");
  eval->add_option("--collisions", eval_args.collisions, "CSV: algo,bits,rate (stdout if omitted)");

  CalibrateArgs cal_args;
  auto* cal = app.add_subcommand("calibrate", "Largest Hamming threshold meeting a nearest-neighbour precision");
  cal->add_option("--corpus", cal_args.corpus, "Bank image directory")->required();
  cal->add_option("--distractors", cal_args.distractors, "Images absent from the bank (impostor probes)");
  cal->add_option("--specs", cal_args.specs, "Comma-separated hash specs")->capture_default_str();
  cal->add_option("--precision", cal_args.precision, "Precision target")->capture_default_str();
  cal->add_option("--seed", cal_args.seed, "Augmentation seed")->capture_default_str();
  cal->add_option("--out", cal_args.out, "CSV: algo,bits,precision,threshold (stdout if omitted)");

  TransferArgs tr_args;
  auto* tr = app.add_subcommand("transfer", "Gray-box transfer matrix from saved attack reports");
  tr->add_option("--reports", tr_args.reports, "Directory of attack JSON reports")->required();
  tr->add_option("--specs", tr_args.specs, "Eval specs")->capture_default_str();
  tr->add_option("--thresholds", tr_args.thresholds, "Calibration CSV; missing specs use 0");
  tr->add_option("--out", tr_args.out, "CSV output (stdout if omitted)");

  CorpusArgs corpus_args;
  auto* corpus = app.add_subcommand("corpus", "Write a synthetic test corpus of PNG scenes");
  corpus->add_option("--out", corpus_args.out, "Output directory")->required();
  corpus->add_option("--count", corpus_args.count, "Number of images")->capture_default_str();
  corpus->add_option("--seed", corpus_args.seed, "Generator seed")->capture_default_str();
  corpus->add_option("--min-side", corpus_args.min_side, "Smallest side")->capture_default_str();
  corpus->add_option("--max-side", corpus_args.max_side, "Largest side")->capture_default_str();

  PcaArgs pca_args;
  auto* pca_fit = app.add_subcommand("pca-fit", "Fit a PCA-median hash from CSV embeddings");
  pca_fit->add_option("--embeddings", pca_args.embeddings, "CSV, one vector per line")->required();
  pca_fit->add_option("--bits", pca_args.bits, "64, 128 or 256")->capture_default_str();
  pca_fit->add_option("--out", pca_args.out, "Model file")->required();
  auto* pca_hash = app.add_subcommand("pca-hash", "Hash CSV embeddings with a fitted model");
  pca_hash->add_option("--model", pca_args.model, "Model file")->required();
  pca_hash->add_option("--embeddings", pca_args.embeddings, "CSV, one vector per line")->required();

  for (auto* sub : {hash, attack, bank_build, bank_query, eval, cal, tr, corpus, pca_fit, pca_hash}) {
    sub->add_option("--config", "Flat key=value file; command-line flags win");
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*hash) return cmd_hash(hash_args);
    if (*attack) return cmd_attack(atk);
    if (*bank_build) return cmd_bank_build(bank_args);
    if (*bank_query) return cmd_bank_query(bank_args);
    if (*eval) return cmd_eval(eval_args);
    if (*cal) return cmd_calibrate(cal_args);
    if (*tr) return cmd_transfer(tr_args);
    if (*corpus) return cmd_corpus(corpus_args);
    if (*pca_fit) return cmd_pca_fit(pca_args);
    if (*pca_hash) return cmd_pca_hash(pca_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
