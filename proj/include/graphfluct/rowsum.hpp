#pragma once

#include <cstddef>

#include "graphfluct/graph.hpp"

namespace gf {

// Masked row sums y[c·ldy + i] = Σ_j ξ_ij x[c·ldx + j] for columns c < ncols.
// Columns of x must be zero beyond n up to words()·64.
void row_sums_serial(const Graph& g, const double* x, size_t ldx, int ncols, double* y, size_t ldy);
void row_sums_omp(const Graph& g, const double* x, size_t ldx, int ncols, double* y, size_t ldy);

// Column sums y[j] = Σ_i ξ_ij x[i]; y must hold words()·64 entries.
void col_sums(const Graph& g, const double* x, double* y);

// Padded length for column buffers.
inline size_t padded_len(const Graph& g) { return g.words() * 64; }

}  // namespace gf
