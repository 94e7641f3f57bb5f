#include "bglasso/designs.hpp"

#include "bglasso/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bglasso {

std::string_view to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::ar1: return "ar1";
    case DesignKind::ar2: return "ar2";
    case DesignKind::block: return "block";
    case DesignKind::star: return "star";
    case DesignKind::circle: return "circle";
    case DesignKind::full: return "full";
  }
  return "unknown";
}

DesignKind parse_design_kind(std::string_view name) {
  for (DesignKind kind : kAllDesigns) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown design '" + std::string(name) +
                              "' (expected ar1, ar2, block, star, circle or full)");
}

namespace {

void require(bool ok, const GraphDesign& d, const char* rule) {
  if (!ok) {
    throw std::invalid_argument("design " + std::string(to_string(d.kind)) + " does not support p = " +
                                std::to_string(d.p) + " (" + rule + ")");
  }
}

// Sets entries outside the mask to exactly zero.
template <typename Keep>
SymMatrix with_pattern(const SymMatrix& m, Keep keep) {
  Matrix out = m.matrix();
  for (Index j = 0; j < out.cols(); ++j) {
    for (Index i = 0; i < out.rows(); ++i) {
      if (i != j && !keep(i, j)) out(i, j) = 0.0;
    }
  }
  return SymMatrix(std::move(out));
}

Adjacency nonzero_pattern(const SymMatrix& omega) {
  const Index p = omega.dim();
  Adjacency adj = Adjacency::Constant(p, p, false);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) adj(i, j) = i != j && omega(i, j) != 0.0;
  }
  return adj;
}

}  // namespace

TrueModel build_design(const GraphDesign& design) {
  const Index p = design.p;
  require(p >= 2, design, "p >= 2");
  Matrix m = Matrix::Zero(p, p);
  bool specified_by_sigma = false;

  switch (design.kind) {
    case DesignKind::ar1:
      specified_by_sigma = true;
      for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) m(i, j) = std::pow(0.7, static_cast<double>(std::abs(i - j)));
      }
      break;
    case DesignKind::ar2:
      require(p >= 3, design, "p >= 3");
      for (Index i = 0; i < p; ++i) {
        m(i, i) = 1.0;
        if (i >= 1) m(i, i - 1) = m(i - 1, i) = 0.5;
        if (i >= 2) m(i, i - 2) = m(i - 2, i) = 0.25;
      }
      break;
    case DesignKind::block: {
      specified_by_sigma = true;
      require(p % 2 == 0, design, "p even");
      const Index half = p / 2;
      for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
          if (i == j) m(i, j) = 1.0;
          else if ((i < half) == (j < half)) m(i, j) = 0.5;
        }
      }
      break;
    }
    case DesignKind::star:
      // The hub's Schur complement is 1 - 0.01 (p - 1).
      require(p <= 100, design, "p <= 100");
      m.diagonal().setOnes();
      for (Index j = 1; j < p; ++j) m(0, j) = m(j, 0) = 0.1;
      break;
    case DesignKind::circle:
      require(p >= 3, design, "p >= 3");
      m.diagonal().setConstant(2.0);
      for (Index i = 1; i < p; ++i) m(i, i - 1) = m(i - 1, i) = 1.0;
      m(0, p - 1) = m(p - 1, 0) = 0.9;
      break;
    case DesignKind::full:
      m.setOnes();
      m.diagonal().setConstant(2.0);
      break;
  }

  const SymMatrix specified(std::move(m));
  require(pd_check(specified).has_value(), design, "specified matrix must be positive definite");

  if (!specified_by_sigma) {
    Adjacency adj = nonzero_pattern(specified);
    return TrueModel{specified, spd_inverse(specified), std::move(adj)};
  }

  const SymMatrix inverse = spd_inverse(specified);
  SymMatrix omega =
      design.kind == DesignKind::ar1
          ? with_pattern(inverse, [](Index i, Index j) { return std::abs(i - j) == 1; })
          : with_pattern(inverse, [&](Index i, Index j) { return std::abs(inverse(i, j)) >= 1e-8; });
  Adjacency adj = nonzero_pattern(omega);
  return TrueModel{std::move(omega), specified, std::move(adj)};
}

Matrix simulate_data(const TrueModel& model, Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_data: n must be positive");
  const auto factor = pd_check(model.sigma_true);
  if (!factor) throw NotPositiveDefinite("simulate_data: covariance not positive definite");
  const Index p = model.sigma_true.dim();
  Matrix z(n, p);
  // Row-major draw order: row t is the t-th observation.
  for (Index t = 0; t < n; ++t) {
    for (Index j = 0; j < p; ++j) z(t, j) = rng.normal();
  }
  return z * factor->lower.transpose();
}

SymMatrix scatter_matrix(const Matrix& y) { return SymMatrix(kernels::crossprod_parallel(y)); }

SymMatrix scatter_matrix_serial(const Matrix& y) { return SymMatrix(kernels::crossprod_serial(y)); }

}  // namespace bglasso
