#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hashcoll {

/// Fixed-length packed binary hash. Bit j lives at bit (j % 64) of word (j / 64);
/// unused high bits of the last word are always zero.
class BitHash {
 public:
  BitHash() = default;
  explicit BitHash(std::size_t bits);
  BitHash(std::size_t bits, std::vector<std::uint64_t> words);

  static BitHash from_bools(std::span<const bool> bits);
  static BitHash from_hex(std::string_view hex, std::size_t bits);

  std::size_t bits() const { return bits_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const std::uint64_t> words() const { return words_; }

  bool get(std::size_t j) const { return (words_[j / 64] >> (j % 64)) & 1u; }
  void set(std::size_t j, bool v);
  std::size_t popcount() const;

  /// Lowercase hex. Bytes follow word order; inside each byte bit 8b is the most
  /// significant, so a hash with only bit 0 set starts with "80".
  std::string to_hex() const;

  friend bool operator==(const BitHash&, const BitHash&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

constexpr std::size_t words_for_bits(std::size_t bits) { return (bits + 63) / 64; }

/// Popcount of XOR. Throws std::invalid_argument on length mismatch.
std::size_t hamming(const BitHash& a, const BitHash& b);

inline std::size_t hamming_words(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < n; ++i) d += static_cast<std::size_t>(__builtin_popcountll(a[i] ^ b[i]));
  return d;
}

}  // namespace hashcoll
