#include "hashcoll/bithash.hpp"

#include <bit>

namespace hashcoll {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitHash::BitHash(std::size_t bits) : bits_(bits), words_(words_for_bits(bits), 0) {
  if (bits == 0) throw std::invalid_argument("BitHash needs at least one bit");
}

BitHash::BitHash(std::size_t bits, std::vector<std::uint64_t> words) : bits_(bits), words_(std::move(words)) {
  if (bits == 0) throw std::invalid_argument("BitHash needs at least one bit");
  if (words_.size() != words_for_bits(bits)) throw std::invalid_argument("BitHash word count mismatch");
  if (bits % 64 != 0 && (words_.back() >> (bits % 64)) != 0) {
    throw std::invalid_argument("BitHash has bits set beyond its length");
  }
}

BitHash BitHash::from_bools(std::span<const bool> bits) {
  BitHash h(bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j) h.set(j, bits[j]);
  return h;
}

void BitHash::set(std::size_t j, bool v) {
  const std::uint64_t mask = std::uint64_t{1} << (j % 64);
  if (v) {
    words_[j / 64] |= mask;
  } else {
    words_[j / 64] &= ~mask;
  }
}

std::size_t BitHash::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::string BitHash::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t nbytes = (bits_ + 7) / 8;
  std::string out;
  out.reserve(nbytes * 2);
  for (std::size_t b = 0; b < nbytes; ++b) {
    unsigned byte = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      const std::size_t j = 8 * b + i;
      if (j < bits_ && get(j)) byte |= 0x80u >> i;
    }
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xf]);
  }
  return out;
}

BitHash BitHash::from_hex(std::string_view hex, std::size_t bits) {
  BitHash h(bits);
  const std::size_t nbytes = (bits + 7) / 8;
  if (hex.size() != nbytes * 2) {
    throw std::invalid_argument("hex length " + std::to_string(hex.size()) + " does not match " +
                                std::to_string(bits) + " bits");
  }
  for (std::size_t b = 0; b < nbytes; ++b) {
    const int hi = hex_value(hex[2 * b]);
    const int lo = hex_value(hex[2 * b + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("non-hex character in hash string");
    const unsigned byte = static_cast<unsigned>(hi << 4 | lo);
    for (std::size_t i = 0; i < 8; ++i) {
      const bool v = byte & (0x80u >> i);
      const std::size_t j = 8 * b + i;
      if (j >= bits) {
        if (v) throw std::invalid_argument("hex sets bits beyond hash length");
        continue;
      }
      h.set(j, v);
    }
  }
  return h;
}

std::size_t hamming(const BitHash& a, const BitHash& b) {
  if (a.bits() != b.bits()) throw std::invalid_argument("hamming: hash lengths differ");
  return hamming_words(a.words().data(), b.words().data(), a.word_count());
}

}  // namespace hashcoll
