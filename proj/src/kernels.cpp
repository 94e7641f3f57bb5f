#include "bglasso/kernels.hpp"

#include <cmath>

namespace bglasso::kernels {
namespace {

// The factor is built as U = Lᵀ so that row i of L is the contiguous column
// U.col(i).
inline double dot_prefix(const Matrix& u, Index a, Index b, Index len) {
  const double* x = u.col(a).data();
  const double* y = u.col(b).data();
  double sum = 0.0;
  for (Index k = 0; k < len; ++k) sum += x[k] * y[k];
  return sum;
}

inline bool pivot(const Matrix& a, Matrix& u, Index j, double tolerance) {
  const double d = a(j, j) - dot_prefix(u, j, j, j);
  if (!(d > 0.0)) return false;
  u(j, j) = std::sqrt(d);
  return u(j, j) > tolerance;
}

}  // namespace

bool cholesky_serial(const Matrix& a, Matrix& lower, double tolerance) {
  const Index p = a.rows();
  Matrix u = Matrix::Zero(p, p);
  for (Index j = 0; j < p; ++j) {
    if (!pivot(a, u, j, tolerance)) return false;
    const double ljj = u(j, j);
    for (Index i = j + 1; i < p; ++i) u(j, i) = (a(i, j) - dot_prefix(u, i, j, j)) / ljj;
  }
  lower = u.transpose();
  return true;
}

bool cholesky_parallel(const Matrix& a, Matrix& lower, double tolerance) {
  const Index p = a.rows();
  Matrix u = Matrix::Zero(p, p);
  bool ok = true;
#pragma omp parallel shared(ok)
  for (Index j = 0; j < p; ++j) {
#pragma omp single
    ok = pivot(a, u, j, tolerance);
    // implicit barrier after single
    if (!ok) break;
    const double ljj = u(j, j);
#pragma omp for schedule(static)
    for (Index i = j + 1; i < p; ++i) u(j, i) = (a(i, j) - dot_prefix(u, i, j, j)) / ljj;
  }
  if (!ok) return false;
  lower = u.transpose();
  return true;
}

bool cholesky(const Matrix& a, Matrix& lower, double tolerance) {
  if (a.rows() >= kParallelCholeskyMinDim) return cholesky_parallel(a, lower, tolerance);
  return cholesky_serial(a, lower, tolerance);
}

Matrix crossprod_serial(const Matrix& y) {
  const Index n = y.rows();
  const Index p = y.cols();
  Matrix s(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double* a = y.col(i).data();
      const double* b = y.col(j).data();
      double sum = 0.0;
      for (Index t = 0; t < n; ++t) sum += a[t] * b[t];
      s(i, j) = sum;
      s(j, i) = sum;
    }
  }
  return s;
}

Matrix crossprod_parallel(const Matrix& y) {
  const Index n = y.rows();
  const Index p = y.cols();
  Matrix s(p, p);
#pragma omp parallel for schedule(dynamic)
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double* a = y.col(i).data();
      const double* b = y.col(j).data();
      double sum = 0.0;
      for (Index t = 0; t < n; ++t) sum += a[t] * b[t];
      s(i, j) = sum;
      s(j, i) = sum;
    }
  }
  return s;
}

}  // namespace bglasso::kernels
