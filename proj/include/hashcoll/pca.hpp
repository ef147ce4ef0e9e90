#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "hashcoll/bithash.hpp"

namespace hashcoll {

class PcaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// PCA projection followed by per-dimension median binarization of embedding vectors.
struct PcaHashModel {
  std::size_t input_dim = 0;
  std::size_t out_bits = 0;
  std::vector<double> mean;        // input_dim
  std::vector<double> components;  // out_bits x input_dim, orthonormal rows
  std::vector<double> medians;     // out_bits

  /// components * (e - mean)
  std::vector<double> project(std::span<const double> e) const;
};

/// Rows of `embeddings` are samples. Components come out in descending eigenvalue
/// order, each flipped so its largest-magnitude entry is positive (first one on ties).
/// Medians are lower medians of the projected training set.
PcaHashModel pca_fit(const std::vector<std::vector<double>>& embeddings, std::size_t out_bits);

/// bit j = 1 iff projection_j >= median_j.
BitHash pca_hash(const PcaHashModel& model, std::span<const double> e);

/// Flat binary: "PCAH", u16 version, u32 input_dim, u16 out_bits, then mean,
/// components and medians as little-endian f64.
void save_pca_model(const std::filesystem::path& path, const PcaHashModel& model);
PcaHashModel load_pca_model(const std::filesystem::path& path);

/// One vector per line, comma separated. Blank lines are skipped.
std::vector<std::vector<double>> read_embeddings_csv(const std::filesystem::path& path);

}  // namespace hashcoll
