#include "hashcoll/dct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hashcoll {

std::vector<double> dct_matrix(std::size_t n) {
  if (n == 0) throw std::invalid_argument("DCT size must be positive");
  std::vector<double> d(n * n);
  const double a0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ak = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = std::numbers::pi * static_cast<double>((2 * i + 1) * k) / static_cast<double>(2 * n);
      d[k * n + i] = (k == 0 ? a0 : ak) * std::cos(arg);
    }
  }
  return d;
}

DctBlock::DctBlock(std::size_t n, std::size_t keep) : n_(n), keep_(keep) {
  if (keep == 0 || keep > n) throw std::invalid_argument("DCT block size must be in [1, N]");
  auto full = dct_matrix(n);
  basis_.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(keep * n));
}

std::vector<double> DctBlock::forward(std::span<const double> m) const {
  if (m.size() != n_ * n_) throw std::invalid_argument("DCT input must be N x N");
  const double ref = m[0];
  // T = D_k (M - ref): keep x n
  std::vector<double> t(keep_ * n_, 0.0);
  for (std::size_t k = 0; k < keep_; ++k) {
    const double* dk = basis_.data() + k * n_;
    double* tk = t.data() + k * n_;
    for (std::size_t i = 0; i < n_; ++i) {
      const double w = dk[i];
      const double* mi = m.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) tk[j] += w * (mi[j] - ref);
    }
  }
  // C = T D_k^T: keep x keep
  std::vector<double> c(keep_ * keep_, 0.0);
  for (std::size_t k = 0; k < keep_; ++k) {
    const double* tk = t.data() + k * n_;
    for (std::size_t l = 0; l < keep_; ++l) {
      const double* dl = basis_.data() + l * n_;
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) acc += tk[j] * dl[j];
      c[k * keep_ + l] = acc;
    }
  }
  c[0] += static_cast<double>(n_) * ref;
  return c;
}

std::vector<double> DctBlock::adjoint(std::span<const double> g) const {
  if (g.size() != keep_ * keep_) throw std::invalid_argument("DCT adjoint input must be keep x keep");
  // U = G D_k: keep x n
  std::vector<double> u(keep_ * n_, 0.0);
  for (std::size_t k = 0; k < keep_; ++k) {
    double* uk = u.data() + k * n_;
    for (std::size_t l = 0; l < keep_; ++l) {
      const double w = g[k * keep_ + l];
      const double* dl = basis_.data() + l * n_;
      for (std::size_t j = 0; j < n_; ++j) uk[j] += w * dl[j];
    }
  }
  // out = D_k^T U: n x n
  std::vector<double> out(n_ * n_, 0.0);
  for (std::size_t k = 0; k < keep_; ++k) {
    const double* dk = basis_.data() + k * n_;
    const double* uk = u.data() + k * n_;
    for (std::size_t i = 0; i < n_; ++i) {
      const double w = dk[i];
      double* oi = out.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) oi[j] += w * uk[j];
    }
  }
  return out;
}

std::vector<double> dct2(std::span<const double> m, std::size_t n) { return DctBlock(n, n).forward(m); }

}  // namespace hashcoll
