#pragma once

// Data-parallel dense kernels. Every OpenMP kernel has a serial twin that
// performs the same floating-point operations in the same order per output
// entry, so both produce bitwise-identical results. The serial versions are
// the reference the tests compare against.

#include "bglasso/matrix_core.hpp"

namespace bglasso::kernels {

/// Below this dimension the Cholesky dispatcher stays serial; the
/// per-column fork/join costs more than the work it splits.
inline constexpr Index kParallelCholeskyMinDim = 96;

/// Left-looking Cholesky. Writes L into `lower` and returns true iff every
/// diagonal entry of L exceeds `tolerance`. `lower` is unspecified on failure.
bool cholesky_serial(const Matrix& a, Matrix& lower, double tolerance);
bool cholesky_parallel(const Matrix& a, Matrix& lower, double tolerance);
bool cholesky(const Matrix& a, Matrix& lower, double tolerance);

/// YᵀY for an n×p data matrix.
Matrix crossprod_serial(const Matrix& y);
Matrix crossprod_parallel(const Matrix& y);

}  // namespace bglasso::kernels
