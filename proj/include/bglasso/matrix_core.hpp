#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace bglasso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Every diagonal entry of the Cholesky factor must exceed this value for a
/// matrix to count as positive definite.
inline constexpr double kPdTolerance = 1e-12;

class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

/// Dense symmetric matrix. Symmetry is exact: construction rejects any
/// asymmetric input and every mutator writes both triangles.
class SymMatrix {
 public:
  /// Throws std::invalid_argument unless `m` is square, non-empty and
  /// exactly symmetric.
  explicit SymMatrix(Matrix m);

  /// (m + mᵀ) / 2, for results of floating-point products that are
  /// symmetric only up to rounding.
  static SymMatrix symmetrized(const Matrix& m);
  static SymMatrix identity(Index p);
  static SymMatrix diagonal(const Vector& d);

  Index dim() const { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  void set(Index i, Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  const Matrix& matrix() const { return m_; }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  struct Unchecked {};
  SymMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}

  Matrix m_;
};

/// Lower-triangular L with strictly positive diagonal such that L·Lᵀ equals
/// the source matrix.
struct CholeskyFactor {
  Matrix lower;

  Index dim() const { return lower.rows(); }
  double log_det() const { return 2.0 * lower.diagonal().array().log().sum(); }
  /// Solves (L·Lᵀ) x = b.
  Vector solve(const Vector& b) const;
};

/// Cholesky factorization with the pivot check `L(j,j) > kPdTolerance`.
/// Returns nothing when `m` is not positive definite. Never throws.
std::optional<CholeskyFactor> pd_check(const SymMatrix& m);

/// Factor of [[A, col], [colᵀ, corner]] given the factor of A. This is the
/// final step of the Cholesky recurrence, so its verdict is identical to
/// running pd_check on the bordered matrix.
std::optional<CholeskyFactor> extend_cholesky(const CholeskyFactor& leading, const Vector& col,
                                              double corner);

/// Inverse of a positive definite matrix, symmetrized. Throws
/// NotPositiveDefinite("matrix not positive definite") otherwise.
SymMatrix spd_inverse(const SymMatrix& m);
SymMatrix spd_inverse(const CholeskyFactor& factor);

/// Swaps row/column `i` with row/column p-1 (0-based). Self-inverse.
/// Throws std::out_of_range for i outside [0, p).
SymMatrix permute_to_last(const SymMatrix& m, Index i);

/// xᵀ M x. Throws std::invalid_argument on a dimension mismatch.
double quad_form(const Vector& x, const SymMatrix& m);

/// Full p×p CSV with 17 significant digits, one row per line.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);

}  // namespace bglasso
