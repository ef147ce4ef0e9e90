#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hashcoll/image.hpp"

namespace hashcoll {

/// Lanczos-3 kernel: sinc(t) * sinc(t/3) inside |t| < 3, zero outside.
double lanczos3(double t);

struct ResampleTap {
  std::size_t index;
  double weight;
};

/// One-dimensional resampling map from in_len samples to out_len samples, stored as
/// per-output sparse rows. Rows are normalized to sum to one, and indices outside the
/// source are folded onto the nearest edge sample.
class ResampleOperator {
 public:
  ResampleOperator() = default;
  ResampleOperator(std::size_t in_len, std::size_t out_len, std::vector<std::vector<ResampleTap>> rows);

  std::size_t in_len() const { return in_len_; }
  std::size_t out_len() const { return out_len_; }
  const std::vector<ResampleTap>& row(std::size_t i) const { return rows_[i]; }
  const std::vector<std::vector<ResampleTap>>& rows() const { return rows_; }

  /// out = R * in over strided vectors. The first tap of each row serves as an anchor so
  /// that a constant input reproduces the constant bit-exactly.
  void apply(std::span<const double> in, std::size_t in_stride, std::span<double> out, std::size_t out_stride) const;

  /// out += R^T * in.
  void apply_transpose_add(std::span<const double> in, std::size_t in_stride, std::span<double> out,
                           std::size_t out_stride) const;

  /// Dense out_len x in_len row-major matrix, for tests and oracles.
  std::vector<double> dense() const;

 private:
  std::size_t in_len_ = 0;
  std::size_t out_len_ = 0;
  std::vector<std::vector<ResampleTap>> rows_;
};

/// Pixel centers sit at i + 0.5. When downscaling by f = in/out > 1 the kernel is
/// stretched by f and its support grows to 3f.
ResampleOperator build_resample_operator(std::size_t in_len, std::size_t out_len);

/// Separable 2-D resampler built once for a fixed (in, out) geometry.
class Resizer {
 public:
  Resizer(std::size_t in_h, std::size_t in_w, std::size_t out_h, std::size_t out_w);

  std::size_t in_h() const { return vertical_.in_len(); }
  std::size_t in_w() const { return horizontal_.in_len(); }
  std::size_t out_h() const { return vertical_.out_len(); }
  std::size_t out_w() const { return horizontal_.out_len(); }
  const ResampleOperator& horizontal() const { return horizontal_; }
  const ResampleOperator& vertical() const { return vertical_; }

  /// Horizontal pass over every row, then vertical pass over every column.
  GrayImage forward(const GrayImage& in) const;

  /// Adjoint: R_v^T * G * R_h, returning an in_h x in_w image.
  GrayImage adjoint(const GrayImage& grad) const;

 private:
  ResampleOperator horizontal_;
  ResampleOperator vertical_;
};

GrayImage lanczos_resize(const GrayImage& img, std::size_t out_h, std::size_t out_w);

namespace kernels {

// The same separable resize computed row by row on the calling thread. The OpenMP
// path in Resizer::forward must agree with it bit for bit.
GrayImage resize_serial(const Resizer& rz, const GrayImage& in);

// Parallel over output rows of each pass. Used directly by the benchmark.
GrayImage resize_parallel(const Resizer& rz, const GrayImage& in);

}  // namespace kernels

}  // namespace hashcoll
