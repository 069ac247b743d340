#include "graphfluct/rowsum.hpp"

#include <algorithm>
#include <bit>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace gf {

namespace {

constexpr int kMaxCols = 4;

// Up to kMaxCols columns for one row.
inline void row_block(const uint64_t* bits, size_t words, const double* x, size_t ldx, int nc, double* out) {
#if defined(__AVX512F__)
  __m512d acc[kMaxCols];
  for (int c = 0; c < nc; ++c) acc[c] = _mm512_setzero_pd();
  for (size_t w = 0; w < words; ++w) {
    const uint64_t b = bits[w];
    if (!b) continue;
    for (int t = 0; t < 8; ++t) {
      const auto m = static_cast<__mmask8>(b >> (8 * t));
      if (!m) continue;
      for (int c = 0; c < nc; ++c)
        acc[c] = _mm512_mask_add_pd(acc[c], m, acc[c], _mm512_loadu_pd(x + c * ldx + w * 64 + 8 * t));
    }
  }
  for (int c = 0; c < nc; ++c) out[c] = _mm512_reduce_add_pd(acc[c]);
#else
  double acc[kMaxCols] = {0.0, 0.0, 0.0, 0.0};
  for (size_t w = 0; w < words; ++w) {
    uint64_t b = bits[w];
    while (b) {
      const size_t j = w * 64 + static_cast<size_t>(std::countr_zero(b));
      for (int c = 0; c < nc; ++c) acc[c] += x[c * ldx + j];
      b &= b - 1;
    }
  }
  for (int c = 0; c < nc; ++c) out[c] = acc[c];
#endif
}

inline void sparse_block(const Graph& g, size_t i, const double* x, size_t ldx, int nc, double* out) {
  double acc[kMaxCols] = {0.0, 0.0, 0.0, 0.0};
  for (const uint32_t* j = g.neighbors_begin(i); j != g.neighbors_end(i); ++j)
    for (int c = 0; c < nc; ++c) acc[c] += x[c * ldx + *j];
  for (int c = 0; c < nc; ++c) out[c] = acc[c];
}

inline void one_row(const Graph& g, size_t i, const double* x, size_t ldx, int ncols, double* y, size_t ldy) {
  double out[kMaxCols];
  for (int c0 = 0; c0 < ncols; c0 += kMaxCols) {
    const int nc = std::min(kMaxCols, ncols - c0);
    if (g.has_sparse()) sparse_block(g, i, x + c0 * ldx, ldx, nc, out);
    else row_block(g.row(i), g.words(), x + c0 * ldx, ldx, nc, out);
    for (int c = 0; c < nc; ++c) y[(c0 + c) * ldy + i] = out[c];
  }
}

}  // namespace

void row_sums_serial(const Graph& g, const double* x, size_t ldx, int ncols, double* y, size_t ldy) {
  for (size_t i = 0; i < g.n(); ++i) one_row(g, i, x, ldx, ncols, y, ldy);
}

void row_sums_omp(const Graph& g, const double* x, size_t ldx, int ncols, double* y, size_t ldy) {
  const auto n = static_cast<long long>(g.n());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) one_row(g, static_cast<size_t>(i), x, ldx, ncols, y, ldy);
}

void col_sums(const Graph& g, const double* x, double* y) {
  const size_t len = padded_len(g);
  std::fill(y, y + len, 0.0);
  for (size_t i = 0; i < g.n(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const uint64_t* bits = g.row(i);
#if defined(__AVX512F__)
    const __m512d v = _mm512_set1_pd(xi);
    for (size_t w = 0; w < g.words(); ++w) {
      const uint64_t b = bits[w];
      if (!b) continue;
      for (int t = 0; t < 8; ++t) {
        const auto m = static_cast<__mmask8>(b >> (8 * t));
        if (!m) continue;
        double* dst = y + w * 64 + 8 * t;
        _mm512_storeu_pd(dst, _mm512_mask_add_pd(_mm512_loadu_pd(dst), m, _mm512_loadu_pd(dst), v));
      }
    }
#else
    for (size_t w = 0; w < g.words(); ++w) {
      uint64_t b = bits[w];
      while (b) {
        y[w * 64 + static_cast<size_t>(std::countr_zero(b))] += xi;
        b &= b - 1;
      }
    }
#endif
  }
}

}  // namespace gf
