#include "hashcoll/resample.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <omp.h>

namespace hashcoll {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Below this many output samples per pass the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelMinWork = 1u << 16;

}  // namespace

double lanczos3(double t) {
  if (std::abs(t) >= 3.0) return 0.0;
  return sinc(t) * sinc(t / 3.0);
}

ResampleOperator::ResampleOperator(std::size_t in_len, std::size_t out_len, std::vector<std::vector<ResampleTap>> rows)
    : in_len_(in_len), out_len_(out_len), rows_(std::move(rows)) {
  if (rows_.size() != out_len_) throw std::invalid_argument("resample operator: row count != out_len");
  for (const auto& r : rows_) {
    if (r.empty()) throw std::invalid_argument("resample operator: empty row");
    for (const auto& t : r) {
      if (t.index >= in_len_) throw std::invalid_argument("resample operator: tap index out of range");
    }
  }
}

void ResampleOperator::apply(std::span<const double> in, std::size_t in_stride, std::span<double> out,
                             std::size_t out_stride) const {
  for (std::size_t i = 0; i < out_len_; ++i) {
    const auto& taps = rows_[i];
    const double anchor = in[taps.front().index * in_stride];
    double acc = 0.0;
    for (const auto& t : taps) acc += t.weight * (in[t.index * in_stride] - anchor);
    out[i * out_stride] = anchor + acc;
  }
}

void ResampleOperator::apply_transpose_add(std::span<const double> in, std::size_t in_stride, std::span<double> out,
                                           std::size_t out_stride) const {
  for (std::size_t i = 0; i < out_len_; ++i) {
    const double g = in[i * in_stride];
    for (const auto& t : rows_[i]) out[t.index * out_stride] += t.weight * g;
  }
}

std::vector<double> ResampleOperator::dense() const {
  std::vector<double> m(out_len_ * in_len_, 0.0);
  for (std::size_t i = 0; i < out_len_; ++i) {
    for (const auto& t : rows_[i]) m[i * in_len_ + t.index] += t.weight;
  }
  return m;
}

ResampleOperator build_resample_operator(std::size_t in_len, std::size_t out_len) {
  if (in_len == 0 || out_len == 0) throw std::invalid_argument("resample lengths must be positive");
  const double scale = static_cast<double>(in_len) / static_cast<double>(out_len);
  const double stretch = std::max(scale, 1.0);
  const double radius = 3.0 * stretch;
  const auto last = static_cast<long>(in_len) - 1;

  std::vector<std::vector<ResampleTap>> rows(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double center = (static_cast<double>(i) + 0.5) * scale;
    const auto lo = static_cast<long>(std::floor(center - radius - 0.5));
    const auto hi = static_cast<long>(std::ceil(center + radius - 0.5));
    std::map<std::size_t, double> merged;
    double total = 0.0;
    for (long j = lo; j <= hi; ++j) {
      const double w = lanczos3((static_cast<double>(j) + 0.5 - center) / stretch);
      if (w == 0.0) continue;
      merged[static_cast<std::size_t>(std::clamp(j, 0L, last))] += w;
      total += w;
    }
    auto& row = rows[i];
    row.reserve(merged.size());
    for (const auto& [idx, w] : merged) row.push_back({idx, w / total});
  }
  return ResampleOperator(in_len, out_len, std::move(rows));
}

Resizer::Resizer(std::size_t in_h, std::size_t in_w, std::size_t out_h, std::size_t out_w)
    : horizontal_(build_resample_operator(in_w, out_w)), vertical_(build_resample_operator(in_h, out_h)) {}

namespace kernels {

namespace {

void horizontal_row(const Resizer& rz, const GrayImage& in, GrayImage& tmp, std::size_t r) {
  rz.horizontal().apply(in.data().subspan(r * in.width(), in.width()), 1,
                        tmp.data().subspan(r * tmp.width(), tmp.width()), 1);
}

// Vertical pass for one output row, vectorized across columns.
void vertical_row(const Resizer& rz, const GrayImage& tmp, GrayImage& out, std::size_t i) {
  const std::size_t w = tmp.width();
  const auto& taps = rz.vertical().row(i);
  const double* anchor = tmp.data().data() + taps.front().index * w;
  double* dst = out.data().data() + i * w;
  std::fill(dst, dst + w, 0.0);
  for (const auto& t : taps) {
    const double* src = tmp.data().data() + t.index * w;
    for (std::size_t c = 0; c < w; ++c) dst[c] += t.weight * (src[c] - anchor[c]);
  }
  for (std::size_t c = 0; c < w; ++c) dst[c] += anchor[c];
}

void check_input(const Resizer& rz, const GrayImage& in) {
  if (in.height() != rz.in_h() || in.width() != rz.in_w()) throw std::invalid_argument("resize: input shape mismatch");
}

}  // namespace

GrayImage resize_serial(const Resizer& rz, const GrayImage& in) {
  check_input(rz, in);
  GrayImage tmp(rz.in_h(), rz.out_w());
  for (std::size_t r = 0; r < rz.in_h(); ++r) horizontal_row(rz, in, tmp, r);
  GrayImage out(rz.out_h(), rz.out_w());
  for (std::size_t i = 0; i < rz.out_h(); ++i) vertical_row(rz, tmp, out, i);
  return out;
}

GrayImage resize_parallel(const Resizer& rz, const GrayImage& in) {
  check_input(rz, in);
  GrayImage tmp(rz.in_h(), rz.out_w());
  const auto in_h = static_cast<long>(rz.in_h());
#pragma omp parallel for schedule(static)
  for (long r = 0; r < in_h; ++r) horizontal_row(rz, in, tmp, static_cast<std::size_t>(r));
  GrayImage out(rz.out_h(), rz.out_w());
  const auto out_h = static_cast<long>(rz.out_h());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < out_h; ++i) vertical_row(rz, tmp, out, static_cast<std::size_t>(i));
  return out;
}

}  // namespace kernels

GrayImage Resizer::forward(const GrayImage& in) const {
  const std::size_t work = in.height() * horizontal_.out_len() * 8;
  if (work >= kParallelMinWork && !omp_in_parallel()) return kernels::resize_parallel(*this, in);
  return kernels::resize_serial(*this, in);
}

GrayImage Resizer::adjoint(const GrayImage& grad) const {
  if (grad.height() != out_h() || grad.width() != out_w()) throw std::invalid_argument("resize adjoint: shape mismatch");
  // Vertical transpose: (out_h x out_w) -> (in_h x out_w).
  GrayImage tmp(in_h(), out_w(), 0.0);
  const std::size_t w = out_w();
  for (std::size_t i = 0; i < out_h(); ++i) {
    const double* g = grad.data().data() + i * w;
    for (const auto& t : vertical_.row(i)) {
      double* dst = tmp.data().data() + t.index * w;
      for (std::size_t c = 0; c < w; ++c) dst[c] += t.weight * g[c];
    }
  }
  // Horizontal transpose on each row: (in_h x out_w) -> (in_h x in_w).
  GrayImage out(in_h(), in_w(), 0.0);
  for (std::size_t r = 0; r < in_h(); ++r) {
    horizontal_.apply_transpose_add(tmp.data().subspan(r * w, w), 1, out.data().subspan(r * in_w(), in_w()), 1);
  }
  return out;
}

GrayImage lanczos_resize(const GrayImage& img, std::size_t out_h, std::size_t out_w) {
  return Resizer(img.height(), img.width(), out_h, out_w).forward(img);
}

}  // namespace hashcoll
