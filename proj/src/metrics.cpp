#include "bglasso/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace bglasso {

void PosteriorMeanAccumulator::add(const SymMatrix& draw) {
  if (count_ == 0) {
    sum_ = draw.matrix();
  } else {
    if (draw.dim() != sum_.rows()) throw std::invalid_argument("posterior_mean: dimension mismatch");
    sum_ += draw.matrix();
  }
  ++count_;
}

EstimateSummary PosteriorMeanAccumulator::summary() const {
  if (count_ == 0) throw std::logic_error("posterior_mean: no draws");
  // Entrywise sums of symmetric matrices stay exactly symmetric.
  return {SymMatrix(sum_ / static_cast<double>(count_)), count_};
}

EstimateSummary posterior_mean(std::span<const SymMatrix> draws) {
  PosteriorMeanAccumulator acc;
  for (const auto& d : draws) acc.add(d);
  return acc.summary();
}

double stein_loss(const SymMatrix& omega_hat, const SymMatrix& omega_true) {
  if (omega_hat.dim() != omega_true.dim()) throw std::invalid_argument("stein_loss: dimension mismatch");
  const auto f_hat = pd_check(omega_hat);
  const auto f_true = pd_check(omega_true);
  if (!f_hat || !f_true) throw NotPositiveDefinite("stein_loss: matrix not positive definite");
  const Index p = omega_hat.dim();
  // tr(Ω̂ Ω⁻¹) = ‖L_true⁻¹ L_hat‖²_F and log det(Ω̂ Ω⁻¹) = log det Ω̂ - log det Ω.
  const Matrix m = f_true->lower.triangularView<Eigen::Lower>().solve(f_hat->lower);
  const double trace = m.squaredNorm();
  const double log_det = f_hat->log_det() - f_true->log_det();
  return trace - log_det - static_cast<double>(p);
}

double frobenius_loss(const SymMatrix& omega_hat, const SymMatrix& omega_true) {
  if (omega_hat.dim() != omega_true.dim()) {
    throw std::invalid_argument("frobenius_loss: dimension mismatch");
  }
  return (omega_hat.matrix() - omega_true.matrix()).norm();
}

Adjacency adjacency_from_estimate(const SymMatrix& omega_hat, double threshold, bool use_absolute_value) {
  if (!(threshold > 0.0)) throw std::invalid_argument("adjacency_from_estimate: threshold must be positive");
  const Index p = omega_hat.dim();
  Adjacency adj = Adjacency::Constant(p, p, false);
  for (Index j = 0; j < p; ++j) {
    for (Index i = j + 1; i < p; ++i) {
      const double v = use_absolute_value ? std::abs(omega_hat(i, j)) : omega_hat(i, j);
      const bool edge = v >= threshold;
      adj(i, j) = edge;
      adj(j, i) = edge;
    }
  }
  return adj;
}

StructureScores StructureScores::from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp,
                                             std::uint64_t fn, MccFormula formula) {
  StructureScores s{tp, tn, fp, fn, 0.0, 0.0, 0.0};
  const double TP = static_cast<double>(tp);
  const double TN = static_cast<double>(tn);
  const double FP = static_cast<double>(fp);
  const double FN = static_cast<double>(fn);
  if (tn + fp > 0) s.specificity = 100.0 * TN / (TN + FP);
  if (tp + fn > 0) s.sensitivity = 100.0 * TP / (TP + FN);
  const double third = formula == MccFormula::standard ? TN + FP : TN + FN;
  const double denom = (TP + FP) * (TP + FN) * third * (TN + FN);
  if (denom > 0.0) s.mcc = 100.0 * (TP * TN - FP * FN) / std::sqrt(denom);
  return s;
}

StructureScores structure_scores(const Adjacency& estimated, const Adjacency& truth, MccFormula formula) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols() ||
      estimated.rows() != estimated.cols()) {
    throw std::invalid_argument("structure_scores: dimension mismatch");
  }
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
  const Index p = truth.rows();
  for (Index j = 0; j < p; ++j) {
    for (Index i = j + 1; i < p; ++i) {
      const bool e = estimated(i, j);
      const bool t = truth(i, j);
      if (e && t) ++tp;
      else if (!e && !t) ++tn;
      else if (e) ++fp;
      else ++fn;
    }
  }
  return StructureScores::from_counts(tp, tn, fp, fn, formula);
}

SymMatrix unit_diag_scale(const SymMatrix& omega) {
  const Index p = omega.dim();
  const Vector d = omega.matrix().diagonal();
  if ((d.array() <= 0.0).any()) throw std::invalid_argument("unit_diag_scale: non-positive diagonal");
  const Vector inv_sqrt = d.array().sqrt().inverse();
  Matrix out(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = j + 1; i < p; ++i) {
      const double v = omega(i, j) * inv_sqrt[i] * inv_sqrt[j];
      out(i, j) = v;
      out(j, i) = v;
    }
    out(j, j) = 1.0;
  }
  return SymMatrix(std::move(out));
}

}  // namespace bglasso
