#pragma once

// Block Gibbs samplers for the Bayesian adaptive graphical LASSO.
//
// Both samplers visit one column of the precision matrix Ω at a time. The
// column is moved to the last position, Ω is split into (Ω11, β = ω12, ω22)
// and reparametrized by the Schur complement γ = ω22 - βᵀΩ11⁻¹β. Each column
// update then draws
//
//   β   | rest ~ N(-C s12, C),  C = ((s22 + 2λ22) Ω11⁻¹ + D_τ⁻¹)⁻¹
//   γ   | rest ~ Ga(n/2 + 1, s22/2 + λ22)            (rate form)
//   λij | rest ~ Ga(r + 1, s + |ωij|)
//   1/τ | rest ~ IG(λij / |ωij|, λij²)
//
// SamplerKind::bgs draws β from the unconstrained normal above, which may
// leave Ω indefinite until ω22 is refreshed. SamplerKind::hrs restricts β to
// {β : βᵀΩ11⁻¹β < ω22} with one hit-and-run move: a uniform direction α and a
// step κ drawn from the exact truncated normal conditional along that line.

#include "bglasso/distributions.hpp"
#include "bglasso/matrix_core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bglasso {

enum class SamplerKind { bgs, hrs };

std::string_view to_string(SamplerKind kind);
/// Accepts "bgs" or "hrs"; throws std::invalid_argument otherwise.
SamplerKind parse_sampler_kind(std::string_view name);

enum class ColumnOrder { ascending, descending };

/// Bounds applied to the latent draws. λ and τ draws are clamped into their
/// ranges and |ωij| is floored inside the inverse Gaussian mean; without
/// them the unconstrained sampler can produce infinite τ or λ.
struct Clamps {
  double lambda_min = 1e-6;
  double lambda_max = 1e6;
  double tau_min = 1e-10;
  double tau_max = 1e10;
  double omega_floor = 1e-10;
};

struct GibbsState {
  SymMatrix omega;    // precision Ω
  SymMatrix tau;      // latent scales τij, diagonal fixed at 0
  SymMatrix lambda;   // shrinkage rates; λii on the diagonal
  SymMatrix scatter;  // S = YᵀY
  int n = 0;
  double r = 1e-2;
  double s = 1e-6;

  /// Ω = I, τij = 1 off the diagonal, λ = 1.
  static GibbsState initial(SymMatrix scatter, int n, double r, double s);
};

/// Column i moved to the last position and split into blocks.
struct ColumnPartition {
  Index column = 0;
  SymMatrix omega11_inv;
  /// Cholesky factor of Ω11; absent only on the BGS path when a previous
  /// update left Ω11 indefinite.
  std::optional<CholeskyFactor> omega11_factor;
  Vector s12;
  double s22 = 0.0;
  Vector tau12;
  Vector lambda12;
  double lambda22 = 0.0;
  Vector beta;
  double omega22 = 0.0;
  double gamma = 0.0;
};

/// Raised by sweep() with the column and stage that failed.
class SamplerError : public std::runtime_error {
 public:
  SamplerError(Index column, std::string stage, const std::string& what)
      : std::runtime_error("column " + std::to_string(column) + ", " + stage + ": " + what),
        column_(column),
        stage_(std::move(stage)) {}
  Index column() const { return column_; }
  const std::string& stage() const { return stage_; }

 private:
  Index column_;
  std::string stage_;
};

/// Partition of column `i` (0-based). For SamplerKind::hrs an indefinite Ω11
/// throws NotPositiveDefinite("leading block not positive definite"); for
/// SamplerKind::bgs Ω11⁻¹ falls back to an LU inverse and omega11_factor is
/// left empty.
ColumnPartition make_partition(const GibbsState& state, Index i, SamplerKind kind = SamplerKind::hrs);

/// C⁻¹ = (s22 + 2λ22) Ω11⁻¹ + D_τ⁻¹.
SymMatrix c_inverse_matrix(const ColumnPartition& part);
/// C itself. Throws NotPositiveDefinite if C⁻¹ fails pd_check.
SymMatrix compute_c_matrix(const ColumnPartition& part);

/// Unconstrained draw from N(-C s12, C).
Vector bgs_update_beta(const ColumnPartition& part, RngStream& rng);

struct Interval {
  double lo;
  double hi;
};

/// Roots of (αᵀΩ11⁻¹α) κ² + 2 (βᵀΩ11⁻¹α) κ - γ = 0, i.e. the segment of the
/// line β + κα inside the positive definite region. Always lo < 0 < hi.
/// Throws NotPositiveDefinite("state not positive definite") if γ <= 0.
Interval hit_and_run_interval(const Vector& alpha, const Vector& beta, const SymMatrix& omega11_inv,
                              double gamma);

/// One hit-and-run move from part.beta. The result always satisfies
/// βᵀΩ11⁻¹β < part.omega22 as judged by the same Cholesky check the audit
/// uses.
Vector hrs_update_beta(const ColumnPartition& part, RngStream& rng);

/// γ ~ Ga(n/2 + 1, s22/2 + λ22). The caller sets ω22 = γ + βᵀΩ11⁻¹β.
double update_gamma(const ColumnPartition& part, int n, RngStream& rng);

struct LambdaColumn {
  Vector lambda12;
  double lambda22;
};

/// λ_j ~ Ga(r + 1, s + |β_j|) and λ22 ~ Ga(r + 1, s + ω22), clamped.
LambdaColumn update_lambda_column(const ColumnPartition& part, const Vector& beta, double omega22,
                                  double r, double s, const Clamps& clamps, RngStream& rng);

/// τ_j = 1/υ_j with υ_j ~ IG(λ_j / max(|β_j|, omega_floor), λ_j²), clamped.
Vector update_tau_column(const Vector& lambda12, const Vector& beta, const Clamps& clamps,
                         RngStream& rng);

inline constexpr std::string_view kStageAfterBeta = "after_beta";
inline constexpr std::string_view kStageAfterGamma = "after_gamma";

/// Positive-definiteness audit. One update per column visit; a visit counts
/// as one violation if Ω fails pd_check after the β write-back or after the
/// ω22 write-back. The per-stage counters record which check failed.
struct ViolationAudit {
  std::uint64_t updates_total = 0;
  std::uint64_t violations = 0;
  std::map<std::string, std::uint64_t, std::less<>> by_column_stage{
      {std::string(kStageAfterBeta), 0}, {std::string(kStageAfterGamma), 0}};

  double ratio() const {
    return updates_total ? static_cast<double>(violations) / static_cast<double>(updates_total) : 0.0;
  }
  void merge(const ViolationAudit& other);
};

struct SweepOptions {
  SamplerKind kind = SamplerKind::hrs;
  ColumnOrder order = ColumnOrder::ascending;
  Clamps clamps;
  /// Skips the β step for the first visited column. Set for the first sweep
  /// of a chain only.
  bool skip_first_beta = false;
};

/// Updates every column once, in place. Throws SamplerError on numerical
/// failure, and for HRS when the positive definiteness check fails.
void sweep(GibbsState& state, const SweepOptions& options, ViolationAudit& audit, RngStream& rng);

struct ChainConfig {
  SamplerKind kind = SamplerKind::hrs;
  int burn_in = 5000;
  int draws = 10000;
  /// Every thin-th post-burn-in sweep enters the posterior mean.
  int thin = 1;
  double r = 1e-2;
  double s = 1e-6;
  Clamps clamps;
  ColumnOrder order = ColumnOrder::ascending;
  bool store_draws = false;

  void validate() const;
};

struct ChainOutput {
  SymMatrix posterior_mean;
  std::size_t draws_used = 0;
  std::vector<SymMatrix> draws;  // filled only with store_draws
  ViolationAudit audit;
  double seconds = 0.0;
};

/// Runs burn_in discarded sweeps and `draws` further sweeps from the
/// initial state. Errors propagate; no partial output is returned.
ChainOutput run_chain(const SymMatrix& scatter, int n, const ChainConfig& config, RngStream& rng);

}  // namespace bglasso
