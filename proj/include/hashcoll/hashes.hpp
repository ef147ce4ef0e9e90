#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hashcoll/bithash.hpp"
#include "hashcoll/image.hpp"

namespace hashcoll {

enum class Algo : std::uint8_t { AHash = 0, DHash = 1, PHash = 2 };

std::string_view algo_name(Algo a);
Algo parse_algo(std::string_view name);

/// Algorithm plus bit length. Everything else about the forward pipeline is derived.
struct HashSpec {
  Algo algo = Algo::AHash;
  std::size_t bits = 64;

  HashSpec() = default;
  HashSpec(Algo a, std::size_t b);

  /// Hash grid side s with bits = s^2.
  std::size_t side() const;
  /// Geometry of the resized grid (stage P1).
  std::size_t grid_h() const;
  std::size_t grid_w() const;

  /// "ahash_256" style label.
  std::string name() const;
  static HashSpec parse(std::string_view label);

  friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

/// All nine shallow configurations: {a,d,p}hash x {64,144,256}.
std::vector<HashSpec> all_shallow_specs();

/// The algorithm-specific transform of a resized grid: the values compared against
/// zero to produce bits, plus the threshold that was subtracted (mean for aHash,
/// median for pHash, zero for dHash).
struct GridTransform {
  GrayImage values;  // s x s
  double threshold = 0.0;
};

/// Stage P2 from stage P1. Shared by the hard hashes and the relaxed pipeline so both
/// threshold exactly the same numbers.
GridTransform transform_grid(const GrayImage& grid, const HashSpec& spec);

class DctBlock;

namespace detail {
// transform_grid with a prebuilt DCT block (pHash only) and an optional fixed threshold
// in place of the pHash median.
GridTransform transform_grid(const GrayImage& grid, const HashSpec& spec, const DctBlock* dct,
                             std::optional<double> frozen_threshold);
}  // namespace detail

/// Hashes a resized luma grid. Bits are row-major; bit = 1 iff the transformed value > 0.
BitHash hash_grid(const GrayImage& grid, const HashSpec& spec);

/// Luma, Lanczos resize to s x s, bit = pixel > mean.
BitHash ahash(const RgbImage& img, std::size_t bits = 64);
/// Luma, resize to s x (s+1), bit = right neighbour brighter.
BitHash dhash(const RgbImage& img, std::size_t bits = 64);
/// Luma, resize to 2s x 2s, orthonormal DCT-II, low-frequency s x s block including DC,
/// bit = coefficient > lower median.
BitHash phash(const RgbImage& img, std::size_t bits = 64);

BitHash hash_image(const RgbImage& img, const HashSpec& spec);

/// Resized luma grid (stage P1) for a spec.
GrayImage resized_grid(const RgbImage& img, const HashSpec& spec);

/// Lower median: element (n-1)/2 of the sorted values.
double lower_median(std::vector<double> values);

}  // namespace hashcoll
