#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hashcoll {

/// Orthonormal DCT-II basis: D[k][n] = a(k) cos(pi (2n+1) k / 2N), a(0) = sqrt(1/N),
/// a(k>0) = sqrt(2/N). Row-major N x N.
std::vector<double> dct_matrix(std::size_t n);

/// Leading `keep` rows of the 2-D orthonormal DCT-II of an N x N matrix, restricted to
/// the leading `keep` columns: the low-frequency block D_k M D_k^T.
///
/// Evaluated as D_k (M - m00) D_k^T + N m00 e00. The two forms agree in exact
/// arithmetic; this one maps a constant matrix to an exact single DC coefficient.
class DctBlock {
 public:
  DctBlock(std::size_t n, std::size_t keep);

  std::size_t n() const { return n_; }
  std::size_t keep() const { return keep_; }

  std::vector<double> forward(std::span<const double> m) const;

  /// Adjoint D_k^T G D_k of the block map.
  std::vector<double> adjoint(std::span<const double> g) const;

 private:
  std::size_t n_;
  std::size_t keep_;
  std::vector<double> basis_;  // keep x n rows of D
};

/// Full N x N orthonormal 2-D DCT-II, row-major in and out.
std::vector<double> dct2(std::span<const double> m, std::size_t n);

}  // namespace hashcoll
