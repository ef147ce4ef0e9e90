#include <doctest.h>

#include <random>

#include "hashcoll/dct.hpp"
#include "hashcoll/eval.hpp"
#include "hashcoll/hashes.hpp"
#include "hashcoll/pca.hpp"
#include "hashcoll/resample.hpp"
#include "support.hpp"

using namespace hashcoll;

TEST_CASE("dct basis is orthonormal") {
  for (std::size_t n : {1, 2, 8, 12, 16, 24, 32}) {
    const auto d = dct_matrix(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += d[i * n + k] * d[j * n + k];
        CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("dct2 matches direct summation") {
  for (double v : dct2(std::vector<double>{1, 0, 0, 0}, 2)) CHECK(std::abs(v - 0.5) < 1e-15);
  for (std::size_t n : {2, 3, 8, 16}) {
    const auto m = oracle::random_vec(n * n, n);
    const auto got = dct2(m, n);
    const auto want = oracle::dct2_direct(m, n);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-10);
  }
}

TEST_CASE("dct2 of a constant is a single DC coefficient") {
  const auto c = dct2(std::vector<double>(4, 0.3), 2);
  CHECK(c[0] == doctest::Approx(0.6).epsilon(1e-15));
  for (std::size_t i = 1; i < 4; ++i) CHECK(c[i] == 0.0);
  const auto big = dct2(std::vector<double>(32 * 32, 0.7), 32);
  CHECK(big[0] == doctest::Approx(32 * 0.7).epsilon(1e-14));
  for (std::size_t i = 1; i < big.size(); ++i) CHECK(big[i] == 0.0);
}

TEST_CASE("dct2 is linear and preserves energy") {
  const std::size_t n = 12;
  const auto a = oracle::random_vec(n * n, 1), b = oracle::random_vec(n * n, 2);
  std::vector<double> s(n * n);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a[i] + b[i];
  const auto da = dct2(a, n), db = dct2(b, n), ds = dct2(s, n);
  double ea = 0.0, eda = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(std::abs(ds[i] - da[i] - db[i]) < 1e-10);
    ea += a[i] * a[i];
    eda += da[i] * da[i];
  }
  CHECK(std::abs(std::sqrt(ea) - std::sqrt(eda)) < 1e-9);
}

TEST_CASE("dct block is the leading corner and its adjoint is exact") {
  const DctBlock blk(16, 8);
  const auto m = oracle::random_vec(256, 3);
  const auto full = dct2(m, 16);
  const auto corner = blk.forward(m);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) CHECK(std::abs(corner[r * 8 + c] - full[r * 16 + c]) < 1e-10);
  }
  const auto g = oracle::random_vec(64, 4);
  const auto atg = blk.adjoint(g);
  // The centering term is linear, so the adjoint identity holds for the full map.
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < 64; ++i) lhs += corner[i] * g[i];
  for (std::size_t i = 0; i < 256; ++i) rhs += m[i] * atg[i];
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("bithash hex codec") {
  CHECK(BitHash(64).to_hex() == "0000000000000000");
  BitHash ones(64);
  for (std::size_t j = 0; j < 64; ++j) ones.set(j, true);
  CHECK(ones.to_hex() == "ffffffffffffffff");
  BitHash first(64);
  first.set(0, true);
  CHECK(first.to_hex() == "8000000000000000");
  BitHash ninth(64);
  ninth.set(8, true);
  CHECK(ninth.to_hex() == "0080000000000000");
  CHECK(BitHash::from_hex("8000000000000000", 64) == first);

  std::mt19937_64 rng(1);
  for (std::size_t bits : {64, 128, 144, 256}) {
    const auto h = oracle::random_hash(bits, rng);
    CHECK(h.to_hex().size() == bits / 4);
    CHECK(BitHash::from_hex(h.to_hex(), bits) == h);
  }
  CHECK_THROWS(BitHash::from_hex("800000000000000", 64));
  CHECK_THROWS(BitHash::from_hex("80000000000000zz", 64));
}

TEST_CASE("bithash keeps unused high bits clear") {
  BitHash h(144);
  for (std::size_t j = 0; j < 144; ++j) h.set(j, true);
  CHECK(h.word_count() == 3);
  CHECK(h.words()[2] == (std::uint64_t{1} << 16) - 1);
  CHECK(h.popcount() == 144);
  CHECK_THROWS(BitHash(64, std::vector<std::uint64_t>{1, 2}));
}

TEST_CASE("hamming distance") {
  BitHash zero(64), ones(64);
  for (std::size_t j = 0; j < 64; ++j) ones.set(j, true);
  CHECK(hamming(zero, ones) == 64);
  CHECK(hamming(ones, ones) == 0);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::random_hash(256, rng), b = oracle::random_hash(256, rng);
    CHECK(hamming(a, b) == oracle::hamming_bits(a, b));
  }
  CHECK_THROWS_AS(hamming(BitHash(64), BitHash(256)), std::invalid_argument);
}

TEST_CASE("hash spec geometry") {
  CHECK(HashSpec(Algo::AHash, 144).side() == 12);
  CHECK(HashSpec(Algo::DHash, 64).grid_w() == 9);
  CHECK(HashSpec(Algo::DHash, 64).grid_h() == 8);
  CHECK(HashSpec(Algo::PHash, 256).grid_h() == 32);
  CHECK(HashSpec::parse("phash_144") == HashSpec(Algo::PHash, 144));
  CHECK(HashSpec(Algo::DHash, 256).name() == "dhash_256");
  CHECK_THROWS(HashSpec(Algo::AHash, 128));
  CHECK_THROWS(HashSpec::parse("bhash_64"));
  CHECK(all_shallow_specs().size() == 9);
}

TEST_CASE("constant images") {
  for (std::size_t bits : {64, 144, 256}) {
    const RgbImage gray(40, 30, 0.6);
    CHECK(ahash(gray, bits).popcount() == 0);
    CHECK(dhash(gray, bits).popcount() == 0);
    CHECK(phash(RgbImage(40, 30, 0.0), bits).popcount() == 0);
    const auto p = phash(gray, bits);
    CHECK(p.popcount() == 1);
    CHECK(p.get(0));
  }
}

TEST_CASE("checkerboard at grid size and horizontal ramp") {
  RgbImage board(8, 8);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) {
      for (int ch = 0; ch < 3; ++ch) board.at(r, c, ch) = (r + c) % 2 ? 1.0 : 0.0;
    }
  }
  const auto h = ahash(board, 64);
  for (std::size_t j = 0; j < 64; ++j) CHECK(h.get(j) == (((j / 8) + (j % 8)) % 2 == 1));

  RgbImage ramp(50, 70);
  for (std::size_t r = 0; r < 50; ++r) {
    for (std::size_t c = 0; c < 70; ++c) {
      for (int ch = 0; ch < 3; ++ch) ramp.at(r, c, ch) = c / 69.0;
    }
  }
  for (std::size_t bits : {64, 144, 256}) CHECK(dhash(ramp, bits).popcount() == bits);
}

TEST_CASE("hashes match the brute-force pipeline oracle") {
  for (const auto& spec : all_shallow_specs()) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto img = oracle::random_rgb(64, 64, 1000 * seed + spec.bits);
      const auto got = hash_image(img, spec);
      const auto want = oracle::hash_bits(img, spec);
      const auto lg = oracle::logits(img, spec);
      for (std::size_t j = 0; j < spec.bits; ++j) {
        if (std::abs(lg[j]) > 1e-9) CHECK(got.get(j) == want[j]);
      }
    }
  }
}

TEST_CASE("identical resized grids give identical hashes") {
  // aHash-256 and pHash-64 both hash a 16x16 grid; a copied grid fixes both hashes.
  const HashSpec a256(Algo::AHash, 256), p64(Algo::PHash, 64);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto img = oracle::random_rgb(40 + seed, 70 - seed, seed);
    const GrayImage copy = resized_grid(img, a256);
    CHECK(resized_grid(img, p64).values() == copy.values());
    CHECK(hash_grid(copy, a256) == hash_image(img, a256));
    CHECK(hash_grid(copy, p64) == hash_image(img, p64));
  }
}

TEST_CASE("hashes are deterministic and robust to faint noise") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.005);
  const auto corpus = synth_corpus(100, 21);
  for (const auto& spec : {HashSpec(Algo::AHash, 256), HashSpec(Algo::DHash, 256), HashSpec(Algo::PHash, 256)}) {
    int stable = 0;
    for (const auto& [id, img] : corpus) {
      CHECK(hash_image(img, spec) == hash_image(img, spec));
      RgbImage noisy = img;
      for (auto& v : noisy.values()) v = std::clamp(v + noise(rng), 0.0, 1.0);
      stable += hamming(hash_image(img, spec), hash_image(noisy, spec)) <= spec.bits / 10;
    }
    CHECK(stable >= 90);
  }
}

TEST_CASE("lower median") {
  CHECK(lower_median({3, 1, 2}) == 2);
  CHECK(lower_median({4, 1, 3, 2}) == 2);
  CHECK(lower_median({5}) == 5);
}

// ---- PCA ----------------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> random_embeddings(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  // Anisotropic so the eigenvalues are well separated.
  std::vector<std::vector<double>> e(n, std::vector<double>(d));
  for (auto& row : e) {
    for (std::size_t j = 0; j < d; ++j) row[j] = g(rng) * (1.0 + 0.7 * static_cast<double>(d - j)) + 0.1 * j;
  }
  return e;
}

}  // namespace

TEST_CASE("pca on axis-aligned data") {
  const std::vector<std::vector<double>> e = {{-2, 0}, {-1, 0}, {0, 0}, {3, 0}, {5, 0}};
  const auto m = pca_fit(e, 1);
  CHECK(std::abs(m.components[0] - 1.0) < 1e-12);
  CHECK(std::abs(m.components[1]) < 1e-12);
  // Projections are x - 1; lower median of {-3,-2,-1,2,4} is -1.
  CHECK(m.medians[0] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pca matches a Jacobi eigensolve") {
  for (auto [n, d, k] : std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{{5, 2, 2}, {40, 6, 3}, {300, 20, 8}}) {
    const auto e = random_embeddings(n, d, n + d);
    const auto model = pca_fit(e, k);
    std::vector<double> mean(d, 0.0);
    for (const auto& row : e) {
      for (std::size_t j = 0; j < d; ++j) mean[j] += row[j] / n;
    }
    oracle::Matrix cov(d, std::vector<double>(d, 0.0));
    for (const auto& row : e) {
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) cov[a][b] += (row[a] - mean[a]) * (row[b] - mean[b]) / n;
      }
    }
    auto [w, v] = oracle::jacobi_eigen(cov);
    std::vector<std::size_t> order(d);
    for (std::size_t i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> vec(d);
      for (std::size_t j = 0; j < d; ++j) vec[j] = v[j][order[c]];
      std::size_t big = 0;
      for (std::size_t j = 1; j < d; ++j) {
        if (std::abs(vec[j]) > std::abs(vec[big]) + 1e-12) big = j;
      }
      if (vec[big] < 0) {
        for (auto& x : vec) x = -x;
      }
      for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(model.components[c * d + j] - vec[j]) < 1e-6);
    }
    for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(model.mean[j] - mean[j]) < 1e-9);
  }
}

TEST_CASE("pca components are orthonormal and medians reproduce") {
  const auto e = random_embeddings(200, 16, 3);
  const auto m = pca_fit(e, 8);
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < 16; ++j) dot += m.components[a * 16 + j] * m.components[b * 16 + j];
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
  }
  for (std::size_t c = 0; c < 8; ++c) {
    std::vector<double> proj;
    for (const auto& row : e) proj.push_back(m.project(row)[c]);
    CHECK(m.medians[c] == lower_median(proj));
  }
}

TEST_CASE("pca hash tie rule and projection oracle") {
  const auto e = random_embeddings(100, 10, 5);
  const auto m = pca_fit(e, 4);
  // A point whose projection sits exactly on the medians: every bit is set.
  std::vector<double> at_median = m.mean;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t j = 0; j < 10; ++j) at_median[j] += m.medians[c] * m.components[c * 10 + j];
  }
  const auto p = m.project(at_median);
  for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(p[c] - m.medians[c]) < 1e-12);

  PcaHashModel exact = m;
  exact.medians = p;
  CHECK(pca_hash(exact, at_median).popcount() == 4);

  PcaHashModel positive = m;
  positive.medians.assign(4, 0.5);
  CHECK(pca_hash(positive, m.mean).popcount() == 0);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(10);
    for (auto& v : x) v = g(rng);
    const auto h = pca_hash(m, x);
    for (std::size_t c = 0; c < 4; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < 10; ++j) acc += m.components[c * 10 + j] * (x[j] - m.mean[j]);
      CHECK(h.get(c) == (acc >= m.medians[c]));
    }
  }
  CHECK_THROWS(pca_hash(m, std::vector<double>(9, 0.0)));
}

TEST_CASE("pca errors and persistence") {
  CHECK_THROWS_AS(pca_fit(random_embeddings(4, 8, 1), 4), PcaError);
  CHECK_THROWS_AS(pca_fit(random_embeddings(30, 3, 1), 4), PcaError);
  CHECK_THROWS_AS(pca_fit(std::vector<std::vector<double>>(20, std::vector<double>(5, 1.0)), 2), PcaError);

  const auto dir = oracle::scratch_dir("pca");
  const auto m = pca_fit(random_embeddings(80, 12, 2), 6);
  save_pca_model(dir / "m.pcah", m);
  const auto back = load_pca_model(dir / "m.pcah");
  CHECK(back.input_dim == 12);
  CHECK(back.out_bits == 6);
  CHECK(back.components == m.components);
  CHECK(back.medians == m.medians);
  CHECK(back.mean == m.mean);
}
