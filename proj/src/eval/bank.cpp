#include <algorithm>
#include <bit>
#include <cstring>
#include <iostream>
#include <numeric>

#include "common/fileutil.hpp"
#include "hashcoll/eval.hpp"

namespace hashcoll {

HashBank::HashBank(HashSpec spec) : spec_(spec), words_per_hash_(words_for_bits(spec.bits)) {}

void HashBank::add(std::string id, const BitHash& h) {
  if (h.bits() != spec_.bits) throw std::invalid_argument("bank: hash length does not match bank spec");
  if (index_.contains(id)) throw std::invalid_argument("bank: duplicate id " + id);
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  packed_.insert(packed_.end(), h.words().begin(), h.words().end());
}

BitHash HashBank::hash(std::size_t i) const {
  const auto first = packed_.begin() + static_cast<std::ptrdiff_t>(i * words_per_hash_);
  return BitHash(spec_.bits, std::vector<std::uint64_t>(first, first + static_cast<std::ptrdiff_t>(words_per_hash_)));
}

std::optional<std::size_t> HashBank::find(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image_path(e.path())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  return out;
}

std::vector<NamedImage> load_corpus(const std::filesystem::path& dir, std::vector<std::string>* skipped) {
  const auto paths = list_images(dir);
  std::vector<std::optional<RgbImage>> decoded(paths.size());
  std::vector<std::string> errors(paths.size());
  const auto n = static_cast<long>(paths.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    try {
      decoded[i] = load_image(paths[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  std::vector<NamedImage> out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (decoded[i]) {
      out.push_back({paths[i].filename().string(), std::move(*decoded[i])});
    } else {
      std::cerr << "warning: skipping " << paths[i].string() << ": " << errors[i] << "\n";
      if (skipped) skipped->push_back(paths[i].filename().string());
    }
  }
  return out;
}

namespace {

std::vector<std::size_t> id_order(const std::vector<NamedImage>& images) {
  std::vector<std::size_t> order(images.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return images[a].id < images[b].id; });
  return order;
}

HashBank assemble(const std::vector<NamedImage>& images, const HashSpec& spec, const std::vector<BitHash>& hashes) {
  HashBank bank(spec);
  for (std::size_t i : id_order(images)) bank.add(images[i].id, hashes[i]);
  return bank;
}

}  // namespace

namespace kernels {

HashBank build_bank_serial(const std::vector<NamedImage>& images, const HashSpec& spec) {
  std::vector<BitHash> hashes;
  hashes.reserve(images.size());
  for (const auto& im : images) hashes.push_back(hash_image(im.image, spec));
  return assemble(images, spec, hashes);
}

std::vector<Neighbor> nn_query_serial(const HashBank& bank, const BitHash& probe, std::size_t k) {
  if (probe.bits() != bank.spec().bits) throw std::invalid_argument("nn_query: probe length mismatch");
  if (k == 0) throw std::invalid_argument("nn_query: k must be at least 1");
  const std::size_t n = bank.size();
  const std::size_t w = bank.words_per_hash();
  std::vector<Neighbor> all(n);
  for (std::size_t i = 0; i < n; ++i) {
    all[i] = {i, hamming_words(bank.packed().data() + i * w, probe.words().data(), w)};
  }
  const std::size_t kk = std::min(k, n);
  auto less = [&](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : bank.id(a.index) < bank.id(b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(kk), all.end(), less);
  all.resize(kk);
  return all;
}

}  // namespace kernels

HashBank build_bank(const std::vector<NamedImage>& images, const HashSpec& spec) {
  if (images.empty()) throw std::invalid_argument("bank: empty corpus");
  std::vector<BitHash> hashes(images.size());
  const auto n = static_cast<long>(images.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i) hashes[i] = hash_image(images[i].image, spec);
  return assemble(images, spec, hashes);
}

HashBank build_bank(const std::filesystem::path& dir, const HashSpec& spec) {
  std::vector<std::string> skipped;
  const auto images = load_corpus(dir, &skipped);
  if (images.empty()) throw std::runtime_error("bank: no decodable images in " + dir.string());
  HashBank bank = build_bank(images, spec);
  bank.skipped = std::move(skipped);
  return bank;
}

std::vector<Neighbor> nn_query(const HashBank& bank, const BitHash& probe, std::size_t k) {
  if (probe.bits() != bank.spec().bits) throw std::invalid_argument("nn_query: probe length mismatch");
  if (k == 0) throw std::invalid_argument("nn_query: k must be at least 1");
  const std::size_t n = bank.size();
  const std::size_t w = bank.words_per_hash();
  const std::uint64_t* packed = bank.packed().data();
  const std::uint64_t* pw = probe.words().data();
  std::vector<std::uint32_t> dist(n);
  const auto nl = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (long i = 0; i < nl; ++i) dist[i] = static_cast<std::uint32_t>(hamming_words(packed + i * w, pw, w));

  const std::size_t kk = std::min(k, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return dist[a] != dist[b] ? dist[a] < dist[b] : bank.id(a) < bank.id(b);
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(kk), idx.end(), less);
  std::vector<Neighbor> out(kk);
  for (std::size_t i = 0; i < kk; ++i) out[i] = {idx[i], dist[idx[i]]};
  return out;
}

// ---- bank file ----

namespace {

static_assert(std::endian::native == std::endian::little, "bank files are written in host byte order");
constexpr std::uint16_t kBankVersion = 1;

template <typename T>
void put(std::vector<unsigned char>& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw std::runtime_error("truncated bank file");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

void save_bank(const std::filesystem::path& path, const HashBank& bank) {
  std::vector<unsigned char> out = {'H', 'B', 'N', 'K'};
  put<std::uint16_t>(out, kBankVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(bank.spec().algo));
  put<std::uint16_t>(out, static_cast<std::uint16_t>(bank.spec().bits));
  put<std::uint64_t>(out, bank.size());
  for (auto w : bank.packed()) put(out, w);
  for (const auto& id : bank.ids()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.insert(out.end(), id.begin(), id.end());
  }
  write_file_atomic(path, out);
}

HashBank load_bank(const std::filesystem::path& path) {
  const std::string in = read_text_file(path);
  if (in.size() < 4 || in.compare(0, 4, "HBNK") != 0) throw std::runtime_error("not a hash bank file");
  std::size_t pos = 4;
  if (take<std::uint16_t>(in, pos) != kBankVersion) throw std::runtime_error("unsupported bank version");
  const auto algo = take<std::uint8_t>(in, pos);
  if (algo > 2) throw std::runtime_error("bank file has unknown algorithm");
  const auto bits = take<std::uint16_t>(in, pos);
  const auto count = take<std::uint64_t>(in, pos);
  HashBank bank(HashSpec(static_cast<Algo>(algo), bits));
  const std::size_t w = bank.words_per_hash();
  if (count > in.size() / 8) throw std::runtime_error("bank count exceeds file size");
  std::vector<std::uint64_t> words(count * w);
  for (auto& v : words) v = take<std::uint64_t>(in, pos);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = take<std::uint32_t>(in, pos);
    if (pos + len > in.size()) throw std::runtime_error("truncated bank id table");
    std::string id = in.substr(pos, len);
    pos += len;
    bank.add(std::move(id), BitHash(bits, std::vector<std::uint64_t>(words.begin() + static_cast<std::ptrdiff_t>(i * w),
                                                                      words.begin() + static_cast<std::ptrdiff_t>((i + 1) * w))));
  }
  if (pos != in.size()) throw std::runtime_error("trailing bytes in bank file");
  return bank;
}

}  // namespace hashcoll
