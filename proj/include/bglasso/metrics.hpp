#pragma once

#include "bglasso/matrix_core.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace bglasso {

using Adjacency = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct EstimateSummary {
  SymMatrix omega_hat;
  std::size_t draws_used = 0;
};

/// Single-pass elementwise mean of a stream of symmetric draws.
class PosteriorMeanAccumulator {
 public:
  void add(const SymMatrix& draw);
  std::size_t count() const { return count_; }
  /// Throws std::logic_error when no draw was added.
  EstimateSummary summary() const;

 private:
  Matrix sum_;
  std::size_t count_ = 0;
};

EstimateSummary posterior_mean(std::span<const SymMatrix> draws);

/// tr(Ω̂Σ) - log det(Ω̂Σ) - p with Σ = Ω_true⁻¹. Throws NotPositiveDefinite
/// for indefinite inputs and std::invalid_argument on a size mismatch.
double stein_loss(const SymMatrix& omega_hat, const SymMatrix& omega_true);

/// ‖Ω̂ - Ω‖_F.
double frobenius_loss(const SymMatrix& omega_hat, const SymMatrix& omega_true);

inline constexpr double kEdgeThreshold = 1e-3;

/// Off-diagonal pairs with |ω̂ij| >= threshold are connected. With
/// use_absolute_value = false the raw value is compared instead, so negative
/// estimates never count as edges.
Adjacency adjacency_from_estimate(const SymMatrix& omega_hat, double threshold = kEdgeThreshold,
                                  bool use_absolute_value = true);

enum class MccFormula {
  standard,    // √((TP+FP)(TP+FN)(TN+FP)(TN+FN))
  as_printed,  // √((TP+FP)(TP+FN)(TN+FN)(TN+FN))
};

/// Confusion counts over unordered off-diagonal pairs and the derived
/// criteria, all in percent. A criterion with a zero denominator is 0.
struct StructureScores {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  double specificity = 0.0;
  double sensitivity = 0.0;
  double mcc = 0.0;

  static StructureScores from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp,
                                     std::uint64_t fn, MccFormula formula = MccFormula::standard);
};

StructureScores structure_scores(const Adjacency& estimated, const Adjacency& truth,
                                 MccFormula formula = MccFormula::standard);

/// D^{-1/2} Ω D^{-1/2}; the diagonal of the result is exactly 1.
SymMatrix unit_diag_scale(const SymMatrix& omega);

}  // namespace bglasso
