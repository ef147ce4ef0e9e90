#include <algorithm>
#include <stdexcept>

#include "hashcoll/dct.hpp"
#include "hashcoll/hashes.hpp"
#include "hashcoll/resample.hpp"

namespace hashcoll {

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::AHash: return "ahash";
    case Algo::DHash: return "dhash";
    case Algo::PHash: return "phash";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  if (name == "ahash") return Algo::AHash;
  if (name == "dhash") return Algo::DHash;
  if (name == "phash") return Algo::PHash;
  throw std::invalid_argument("unknown hash algorithm: " + std::string(name));
}

HashSpec::HashSpec(Algo a, std::size_t b) : algo(a), bits(b) {
  if (b != 64 && b != 144 && b != 256) throw std::invalid_argument("shallow hashes support 64, 144 or 256 bits");
}

std::size_t HashSpec::side() const {
  switch (bits) {
    case 64: return 8;
    case 144: return 12;
    case 256: return 16;
    default: throw std::invalid_argument("invalid hash length");
  }
}

std::size_t HashSpec::grid_h() const { return algo == Algo::PHash ? 2 * side() : side(); }

std::size_t HashSpec::grid_w() const {
  switch (algo) {
    case Algo::AHash: return side();
    case Algo::DHash: return side() + 1;
    case Algo::PHash: return 2 * side();
  }
  return side();
}

std::string HashSpec::name() const { return std::string(algo_name(algo)) + "_" + std::to_string(bits); }

HashSpec HashSpec::parse(std::string_view label) {
  const auto us = label.find('_');
  if (us == std::string_view::npos) throw std::invalid_argument("hash spec must look like ahash_64");
  const std::string bits_str(label.substr(us + 1));
  std::size_t pos = 0;
  std::size_t bits = 0;
  try {
    bits = std::stoul(bits_str, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != bits_str.size()) throw std::invalid_argument("bad bit count in hash spec: " + bits_str);
  return HashSpec(parse_algo(label.substr(0, us)), bits);
}

std::vector<HashSpec> all_shallow_specs() {
  std::vector<HashSpec> out;
  for (Algo a : {Algo::AHash, Algo::DHash, Algo::PHash}) {
    for (std::size_t b : {64u, 144u, 256u}) out.emplace_back(a, b);
  }
  return out;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

GridTransform transform_grid(const GrayImage& grid, const HashSpec& spec) {
  if (spec.algo == Algo::PHash) {
    const DctBlock dct(2 * spec.side(), spec.side());
    return detail::transform_grid(grid, spec, &dct, std::nullopt);
  }
  return detail::transform_grid(grid, spec, nullptr, std::nullopt);
}

GridTransform detail::transform_grid(const GrayImage& grid, const HashSpec& spec, const DctBlock* dct,
                                     std::optional<double> frozen_threshold) {
  if (grid.height() != spec.grid_h() || grid.width() != spec.grid_w()) {
    throw std::invalid_argument("grid shape does not match " + spec.name());
  }
  const std::size_t s = spec.side();
  GridTransform out{GrayImage(s, s), 0.0};
  switch (spec.algo) {
    case Algo::AHash: {
      // Mean accumulated relative to the first cell: exact for constant grids.
      const auto g = grid.data();
      const double ref = g[0];
      double acc = 0.0;
      for (double v : g) acc += v - ref;
      out.threshold = ref + acc / static_cast<double>(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) out.values.data()[i] = g[i] - out.threshold;
      break;
    }
    case Algo::DHash:
      for (std::size_t r = 0; r < s; ++r) {
        for (std::size_t c = 0; c < s; ++c) out.values.at(r, c) = grid.at(r, c + 1) - grid.at(r, c);
      }
      break;
    case Algo::PHash: {
      if (dct == nullptr || dct->n() != 2 * s || dct->keep() != s) throw std::invalid_argument("bad DCT basis");
      const auto block = dct->forward(grid.data());
      out.threshold = frozen_threshold ? *frozen_threshold : lower_median(block);
      for (std::size_t i = 0; i < block.size(); ++i) out.values.data()[i] = block[i] - out.threshold;
      break;
    }
  }
  return out;
}

BitHash hash_grid(const GrayImage& grid, const HashSpec& spec) {
  const auto t = transform_grid(grid, spec);
  BitHash h(spec.bits);
  const auto v = t.values.data();
  for (std::size_t j = 0; j < v.size(); ++j) h.set(j, v[j] > 0.0);
  return h;
}

GrayImage resized_grid(const RgbImage& img, const HashSpec& spec) {
  return lanczos_resize(to_luma(img), spec.grid_h(), spec.grid_w());
}

BitHash hash_image(const RgbImage& img, const HashSpec& spec) { return hash_grid(resized_grid(img, spec), spec); }

BitHash ahash(const RgbImage& img, std::size_t bits) { return hash_image(img, HashSpec(Algo::AHash, bits)); }
BitHash dhash(const RgbImage& img, std::size_t bits) { return hash_image(img, HashSpec(Algo::DHash, bits)); }
BitHash phash(const RgbImage& img, std::size_t bits) { return hash_image(img, HashSpec(Algo::PHash, bits)); }

}  // namespace hashcoll
