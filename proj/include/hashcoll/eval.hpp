#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hashcoll/bithash.hpp"
#include "hashcoll/hashes.hpp"
#include "hashcoll/image.hpp"
#include "hashcoll/report.hpp"

namespace hashcoll {

// ---- bank -------------------------------------------------------------------

/// Ordered (id, hash) entries plus a contiguous word array for scanning.
class HashBank {
 public:
  explicit HashBank(HashSpec spec);

  const HashSpec& spec() const { return spec_; }
  std::size_t size() const { return ids_.size(); }
  std::size_t words_per_hash() const { return words_per_hash_; }

  /// Throws std::invalid_argument on a duplicate id or a hash of the wrong length.
  void add(std::string id, const BitHash& h);

  const std::string& id(std::size_t i) const { return ids_[i]; }
  BitHash hash(std::size_t i) const;
  const std::vector<std::uint64_t>& packed() const { return packed_; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<std::size_t> find(const std::string& id) const;

  /// Files that could not be decoded while building from a directory.
  std::vector<std::string> skipped;

 private:
  HashSpec spec_;
  std::size_t words_per_hash_;
  std::vector<std::string> ids_;
  std::vector<std::uint64_t> packed_;
  std::map<std::string, std::size_t> index_;
};

struct NamedImage {
  std::string id;
  RgbImage image;
};

/// Image files (.png, .ppm) in a directory, sorted by filename.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// Decodes every image in `dir`; undecodable files are reported through `skipped`.
std::vector<NamedImage> load_corpus(const std::filesystem::path& dir, std::vector<std::string>* skipped = nullptr);

/// Entries are in lexicographic id order whatever the input order. Hashing runs in parallel.
HashBank build_bank(const std::vector<NamedImage>& images, const HashSpec& spec);
HashBank build_bank(const std::filesystem::path& dir, const HashSpec& spec);

/// "HBNK", u16 version, u8 algo, u16 bits, u64 count, packed words, then u32 length
/// prefixed UTF-8 ids, all little-endian.
void save_bank(const std::filesystem::path& path, const HashBank& bank);
HashBank load_bank(const std::filesystem::path& path);

struct Neighbor {
  std::size_t index;
  std::size_t distance;
};

/// Exact top-k by Hamming distance, ascending, ties broken by id. k is clamped to the
/// bank size. Distances are computed in parallel.
std::vector<Neighbor> nn_query(const HashBank& bank, const BitHash& probe, std::size_t k);

namespace kernels {
// Single-threaded packed scan with the same ordering as nn_query.
std::vector<Neighbor> nn_query_serial(const HashBank& bank, const BitHash& probe, std::size_t k);
// Single-threaded bank construction.
HashBank build_bank_serial(const std::vector<NamedImage>& images, const HashSpec& spec);
}  // namespace kernels

// ---- augmentation -------------------------------------------------------------

enum class AugKind : std::uint8_t { Identity, GaussNoise, Brightness, Contrast, Rescale, BoxBlur3 };

struct AugSpec {
  AugKind kind = AugKind::Identity;
  double param = 0.0;  // sigma, signed fraction, or scale factor
  std::uint64_t seed = 0;

  std::string label() const;
  void validate() const;
};

/// The fixed probe suite: noise 0.02, brightness +-10%, contrast +-10%, rescale 0.9, 3x3 box blur.
std::vector<AugSpec> default_aug_suite(std::uint64_t seed);

/// Deterministic for a given (spec, salt). `salt` distinguishes probes sharing one spec.
RgbImage augment(const RgbImage& img, const AugSpec& aug, std::uint64_t salt = 0);

// ---- baselines --------------------------------------------------------------------

struct AccuracyRow {
  std::string aug;
  std::size_t k;
  double accuracy;
};

/// For every image and augmentation: augment, hash, query; hit iff the image's own id is in
/// the top-k. Throws if an image id is missing from the bank.
std::vector<AccuracyRow> topk_accuracy(const HashBank& bank, const std::vector<NamedImage>& corpus,
                                       const std::vector<AugSpec>& augs, const std::vector<std::size_t>& ks);

/// Fraction of entries whose hash also belongs to at least one other entry.
double collision_rate(const HashBank& bank);

// ---- calibration ---------------------------------------------------------------------

struct DistanceSamples {
  std::vector<std::size_t> genuine;   // nearest neighbour is the probe's true id
  std::vector<std::size_t> impostor;  // nearest neighbour is some other entry
};

/// Nearest-neighbour distances for augmented members of the bank and for distractor
/// images that are not in the bank (always impostors).
DistanceSamples collect_nn_distances(const HashBank& bank, const std::vector<NamedImage>& members,
                                     const std::vector<NamedImage>& distractors, const std::vector<AugSpec>& augs);

struct Calibration {
  std::size_t threshold;
  double precision;  // at the threshold; 1 when nothing falls at or below it
};

/// Largest t in [0, max_distance] whose precision |G<=t| / (|G<=t| + |I<=t|) reaches
/// `target`; an empty denominator counts as precision 1. nullopt when no t qualifies.
std::optional<Calibration> calibrate_threshold(const std::vector<std::size_t>& genuine,
                                               const std::vector<std::size_t>& impostor, double target,
                                               std::size_t max_distance);

// ---- transfer --------------------------------------------------------------------------

struct TransferCell {
  HashSpec attack_spec;
  std::string split;  // objective label of the attack
  HashSpec eval_spec;
  std::size_t threshold = 0;
  double success_rate = 0.0;
  std::size_t n = 0;
};

struct LoadedReport {
  AttackReport report;
  std::filesystem::path adversarial;  // resolved
  std::filesystem::path target;       // resolved
};

/// All *.json reports in a directory, sorted by filename, with image paths resolved.
std::vector<LoadedReport> load_reports(const std::filesystem::path& dir);

/// Re-hashes adversarial and target images under every eval spec; success iff
/// hamming <= thresholds[eval spec name] (0 if absent). One cell per
/// (attack spec, split) group x eval spec, groups in first-seen order.
std::vector<TransferCell> transfer_matrix(const std::vector<LoadedReport>& reports,
                                          const std::vector<HashSpec>& eval_specs,
                                          const std::map<std::string, std::size_t>& thresholds);

// ---- csv ---------------------------------------------------------------------------------

std::string baseline_csv(const HashSpec& spec, const std::vector<AccuracyRow>& rows, bool header = true);
std::string collision_csv(const std::vector<std::pair<HashSpec, double>>& rows);
std::string calibration_csv(const std::vector<std::pair<HashSpec, Calibration>>& rows, double precision);
std::string transfer_csv(const std::vector<TransferCell>& cells);

/// Parses calibration_csv output into spec name -> threshold.
std::map<std::string, std::size_t> read_thresholds_csv(const std::filesystem::path& path);

// ---- synthetic corpus ----------------------------------------------------------------------

/// Procedural scene: a two-region or gradient backdrop, a few soft-edged shapes, mid
/// frequency texture and pixel noise. Deterministic in `seed`.
RgbImage synth_image(std::uint64_t seed, std::size_t height, std::size_t width);

/// Writes `count` PNGs named img_00000.png... with side lengths in [min_side, max_side].
void generate_corpus(const std::filesystem::path& dir, std::size_t count, std::uint64_t seed,
                     std::size_t min_side = 64, std::size_t max_side = 112);

/// In-memory version of generate_corpus with the same ids and pixels (before 8-bit rounding
/// when `quantize8` is false).
std::vector<NamedImage> synth_corpus(std::size_t count, std::uint64_t seed, std::size_t min_side = 64,
                                     std::size_t max_side = 112, bool quantize8 = true);

}  // namespace hashcoll
