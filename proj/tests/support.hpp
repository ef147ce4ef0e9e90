// Shared fixtures and brute-force oracles for the unit tests. The oracles deliberately
// avoid the library's operators: they rebuild each formula from scratch in the slowest
// obvious way.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hashcoll/bithash.hpp"
#include "hashcoll/hashes.hpp"
#include "hashcoll/image.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline hashcoll::RgbImage random_rgb(std::size_t h, std::size_t w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  hashcoll::RgbImage img(h, w);
  for (auto& v : img.values()) v = u(rng);
  return img;
}

inline hashcoll::GrayImage random_gray(std::size_t h, std::size_t w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  hashcoll::GrayImage img(h, w);
  for (auto& v : img.values()) v = u(rng);
  return img;
}

inline std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

inline double kernel(double t) {
  if (std::abs(t) >= 3.0) return 0.0;
  auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x); };
  return sinc(t) * sinc(t / 3.0);
}

// out_len x in_len Lanczos-3 matrix from the kernel formula, summing over a generous window
// of integer source positions and clamping each to the edge.
inline Matrix lanczos_matrix(std::size_t in_len, std::size_t out_len) {
  const double f = static_cast<double>(in_len) / static_cast<double>(out_len);
  const double s = std::max(f, 1.0);
  Matrix m(out_len, std::vector<double>(in_len, 0.0));
  const long reach = static_cast<long>(std::ceil(3 * s)) + 3;
  for (std::size_t i = 0; i < out_len; ++i) {
    const double x = (i + 0.5) * f;
    double total = 0.0;
    for (long j = static_cast<long>(std::floor(x)) - reach; j <= static_cast<long>(std::floor(x)) + reach; ++j) {
      const double wt = kernel((j + 0.5 - x) / s);
      const long jj = std::clamp<long>(j, 0, static_cast<long>(in_len) - 1);
      m[i][jj] += wt;
      total += wt;
    }
    for (auto& v : m[i]) v /= total;
  }
  return m;
}

inline hashcoll::GrayImage resize(const hashcoll::GrayImage& x, std::size_t oh, std::size_t ow) {
  const Matrix rv = lanczos_matrix(x.height(), oh);
  const Matrix rh = lanczos_matrix(x.width(), ow);
  hashcoll::GrayImage out(oh, ow);
  for (std::size_t i = 0; i < oh; ++i) {
    for (std::size_t j = 0; j < ow; ++j) {
      double acc = 0.0;
      for (std::size_t a = 0; a < x.height(); ++a) {
        for (std::size_t b = 0; b < x.width(); ++b) acc += rv[i][a] * x.at(a, b) * rh[j][b];
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

inline hashcoll::GrayImage luma(const hashcoll::RgbImage& img) {
  hashcoll::GrayImage out(img.height(), img.width());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      out.at(r, c) = 0.299 * img.at(r, c, 0) + 0.587 * img.at(r, c, 1) + 0.114 * img.at(r, c, 2);
    }
  }
  return out;
}

// Direct double sum C[k][l] = sum_m sum_n a(k) a(l) M[m][n] cos(..k..) cos(..l..).
inline std::vector<double> dct2_direct(const std::vector<double>& m, std::size_t n) {
  const double nn = static_cast<double>(n);
  auto alpha = [&](std::size_t k) { return k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn); };
  std::vector<double> out(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      double acc = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          acc += m[a * n + b] * std::cos(std::numbers::pi * (2.0 * a + 1.0) * k / (2.0 * nn)) *
                 std::cos(std::numbers::pi * (2.0 * b + 1.0) * l / (2.0 * nn));
        }
      }
      out[k * n + l] = alpha(k) * alpha(l) * acc;
    }
  }
  return out;
}

// Transformed values compared against zero, rebuilt from the formulas.
inline std::vector<double> logits(const hashcoll::RgbImage& img, const hashcoll::HashSpec& spec) {
  using hashcoll::Algo;
  const std::size_t s = spec.side();
  std::vector<double> out;
  if (spec.algo == Algo::AHash) {
    const auto g = resize(luma(img), s, s);
    double mean = 0.0;
    for (double v : g.values()) mean += v;
    mean /= g.size();
    for (double v : g.values()) out.push_back(v - mean);
  } else if (spec.algo == Algo::DHash) {
    const auto g = resize(luma(img), s, s + 1);
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) out.push_back(g.at(r, c + 1) - g.at(r, c));
    }
  } else {
    const auto g = resize(luma(img), 2 * s, 2 * s);
    const auto d = dct2_direct(g.values(), 2 * s);
    std::vector<double> block;
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) block.push_back(d[r * 2 * s + c]);
    }
    auto sorted = block;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[(sorted.size() - 1) / 2];
    for (double v : block) out.push_back(v - med);
  }
  return out;
}

inline std::vector<bool> hash_bits(const hashcoll::RgbImage& img, const hashcoll::HashSpec& spec) {
  std::vector<bool> bits;
  for (double v : logits(img, spec)) bits.push_back(v > 0.0);
  return bits;
}

inline std::size_t hamming_bits(const hashcoll::BitHash& a, const hashcoll::BitHash& b) {
  std::size_t d = 0;
  for (std::size_t j = 0; j < a.bits(); ++j) d += a.get(j) != b.get(j);
  return d;
}

inline hashcoll::BitHash random_hash(std::size_t bits, std::mt19937_64& rng) {
  hashcoll::BitHash h(bits);
  for (std::size_t j = 0; j < bits; ++j) h.set(j, rng() & 1u);
  return h;
}

// Cyclic Jacobi eigensolver for a symmetric matrix; returns (eigenvalues, eigenvectors as columns).
inline std::pair<std::vector<double>, Matrix> jacobi_eigen(Matrix a) {
  const std::size_t n = a.size();
  Matrix v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = a[i][i];
  return {w, v};
}

// Scratch directory under the build tree, emptied on construction.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hashcoll_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
