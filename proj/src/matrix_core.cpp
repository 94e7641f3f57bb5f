#include "bglasso/matrix_core.hpp"

#include "bglasso/kernels.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace bglasso {

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw std::invalid_argument("SymMatrix: expected a non-empty square matrix");
  }
  for (Index j = 0; j < m_.cols(); ++j) {
    for (Index i = j + 1; i < m_.rows(); ++i) {
      if (m_(i, j) != m_(j, i)) throw std::invalid_argument("SymMatrix: matrix is not symmetric");
    }
  }
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument("SymMatrix: expected a non-empty square matrix");
  }
  Matrix s = m;
  for (Index j = 0; j < s.cols(); ++j) {
    for (Index i = j + 1; i < s.rows(); ++i) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SymMatrix(std::move(s), Unchecked{});
}

SymMatrix SymMatrix::identity(Index p) {
  if (p < 1) throw std::invalid_argument("SymMatrix: dimension must be positive");
  return SymMatrix(Matrix::Identity(p, p), Unchecked{});
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  if (d.size() < 1) throw std::invalid_argument("SymMatrix: dimension must be positive");
  return SymMatrix(Matrix(d.asDiagonal()), Unchecked{});
}

Vector CholeskyFactor::solve(const Vector& b) const {
  Vector y = lower.triangularView<Eigen::Lower>().solve(b);
  return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

std::optional<CholeskyFactor> pd_check(const SymMatrix& m) {
  CholeskyFactor f;
  if (!kernels::cholesky(m.matrix(), f.lower, kPdTolerance)) return std::nullopt;
  return f;
}

std::optional<CholeskyFactor> extend_cholesky(const CholeskyFactor& leading, const Vector& col,
                                              double corner) {
  const Index k = leading.dim();
  if (col.size() != k) throw std::invalid_argument("extend_cholesky: dimension mismatch");
  // Same recurrence and summation order as kernels::cholesky's last row.
  const Matrix& lower = leading.lower;
  Vector l(k);
  for (Index j = 0; j < k; ++j) {
    double sum = 0.0;
    for (Index m = 0; m < j; ++m) sum += l[m] * lower(j, m);
    l[j] = (col[j] - sum) / lower(j, j);
  }
  double norm2 = 0.0;
  for (Index m = 0; m < k; ++m) norm2 += l[m] * l[m];
  const double d = corner - norm2;
  if (!(d > 0.0) || !(std::sqrt(d) > kPdTolerance)) return std::nullopt;
  CholeskyFactor f;
  f.lower = Matrix::Zero(k + 1, k + 1);
  f.lower.topLeftCorner(k, k) = leading.lower;
  f.lower.block(k, 0, 1, k) = l.transpose();
  f.lower(k, k) = std::sqrt(d);
  return f;
}

SymMatrix spd_inverse(const CholeskyFactor& factor) {
  const Index p = factor.dim();
  const Matrix linv = factor.lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p));
  return SymMatrix::symmetrized(linv.transpose() * linv);
}

SymMatrix spd_inverse(const SymMatrix& m) {
  const auto factor = pd_check(m);
  if (!factor) throw NotPositiveDefinite("matrix not positive definite");
  return spd_inverse(*factor);
}

SymMatrix permute_to_last(const SymMatrix& m, Index i) {
  const Index p = m.dim();
  if (i < 0 || i >= p) throw std::out_of_range("permute_to_last: index out of range");
  Matrix out = m.matrix();
  out.row(i).swap(out.row(p - 1));
  out.col(i).swap(out.col(p - 1));
  return SymMatrix(std::move(out));
}

double quad_form(const Vector& x, const SymMatrix& m) {
  if (x.size() != m.dim()) throw std::invalid_argument("quad_form: dimension mismatch");
  return x.dot(m.matrix() * x);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix_csv(out, m);
}

}  // namespace bglasso
