#include "bglasso/sampler.hpp"

#include "bglasso/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace bglasso {

std::string_view to_string(SamplerKind kind) { return kind == SamplerKind::bgs ? "bgs" : "hrs"; }

SamplerKind parse_sampler_kind(std::string_view name) {
  if (name == "bgs") return SamplerKind::bgs;
  if (name == "hrs") return SamplerKind::hrs;
  throw std::invalid_argument("unknown sampler '" + std::string(name) + "' (expected bgs or hrs)");
}

GibbsState GibbsState::initial(SymMatrix scatter, int n, double r, double s) {
  if (n < 1) throw std::invalid_argument("GibbsState: n must be positive");
  if (!(r > 0.0) || !(s > 0.0)) throw std::invalid_argument("GibbsState: r and s must be positive");
  const Index p = scatter.dim();
  Matrix tau = Matrix::Ones(p, p);
  tau.diagonal().setZero();
  return GibbsState{SymMatrix::identity(p), SymMatrix(std::move(tau)), SymMatrix(Matrix::Ones(p, p)),
                    std::move(scatter), n, r, s};
}

void ViolationAudit::merge(const ViolationAudit& other) {
  updates_total += other.updates_total;
  violations += other.violations;
  for (const auto& [stage, count] : other.by_column_stage) by_column_stage[stage] += count;
}

ColumnPartition make_partition(const GibbsState& state, Index i, SamplerKind kind) {
  const Index p = state.omega.dim();
  if (p < 2) throw std::invalid_argument("make_partition: dimension must be at least 2");
  const Index k = p - 1;
  const SymMatrix omega = permute_to_last(state.omega, i);
  const SymMatrix scatter = permute_to_last(state.scatter, i);
  const SymMatrix tau = permute_to_last(state.tau, i);
  const SymMatrix lambda = permute_to_last(state.lambda, i);

  const SymMatrix omega11(omega.matrix().topLeftCorner(k, k));
  auto factor = pd_check(omega11);
  std::optional<SymMatrix> inv;
  if (factor) {
    inv = spd_inverse(*factor);
  } else if (kind == SamplerKind::hrs) {
    throw NotPositiveDefinite("leading block not positive definite");
  } else {
    inv = SymMatrix::symmetrized(omega11.matrix().partialPivLu().inverse());
  }

  ColumnPartition part{i,
                       std::move(*inv),
                       std::move(factor),
                       scatter.matrix().col(k).head(k),
                       scatter(k, k),
                       tau.matrix().col(k).head(k),
                       lambda.matrix().col(k).head(k),
                       lambda(k, k),
                       omega.matrix().col(k).head(k),
                       omega(k, k),
                       0.0};
  part.gamma = part.omega22 - quad_form(part.beta, part.omega11_inv);
  return part;
}

namespace {

double beta_scale(const ColumnPartition& part) { return part.s22 + 2.0 * part.lambda22; }

// C⁻¹ v without forming C⁻¹.
Vector apply_c_inverse(const ColumnPartition& part, const Vector& v) {
  return beta_scale(part) * (part.omega11_inv.matrix() * v) + v.cwiseQuotient(part.tau12);
}

// Positive definiteness of Ω with column block (beta, omega22). Ω is a
// symmetric permutation of this bordered matrix, so the verdict carries over.
bool bordered_pd(const ColumnPartition& part, const Vector& beta, double omega22) {
  return part.omega11_factor && extend_cholesky(*part.omega11_factor, beta, omega22).has_value();
}

}  // namespace

SymMatrix c_inverse_matrix(const ColumnPartition& part) {
  Matrix m = beta_scale(part) * part.omega11_inv.matrix();
  m.diagonal() += part.tau12.cwiseInverse();
  return SymMatrix::symmetrized(m);
}

SymMatrix compute_c_matrix(const ColumnPartition& part) { return spd_inverse(c_inverse_matrix(part)); }

Vector bgs_update_beta(const ColumnPartition& part, RngStream& rng) {
  const auto factor = pd_check(c_inverse_matrix(part));
  if (!factor) throw NotPositiveDefinite("conditional precision of beta not positive definite");
  return sample_mvn_canonical(-part.s12, *factor, rng);
}

Interval hit_and_run_interval(const Vector& alpha, const Vector& beta, const SymMatrix& omega11_inv,
                              double gamma) {
  if (!(gamma > 0.0)) throw NotPositiveDefinite("state not positive definite");
  if (alpha.size() != omega11_inv.dim() || beta.size() != omega11_inv.dim()) {
    throw std::invalid_argument("hit_and_run_interval: dimension mismatch");
  }
  const Vector w = omega11_inv.matrix() * alpha;
  const double a = alpha.dot(w);
  const double b = beta.dot(w);
  if (!(a > 0.0)) throw NotPositiveDefinite("state not positive definite");
  // a κ² + 2 b κ - γ has roots of opposite sign; pair each root with the
  // cancellation-free form.
  const double root = std::sqrt(b * b + a * gamma);
  if (b >= 0.0) {
    const double q = b + root;
    return {-q / a, gamma / q};
  }
  const double q = root - b;
  return {-gamma / q, q / a};
}

Vector hrs_update_beta(const ColumnPartition& part, RngStream& rng) {
  const Index k = part.beta.size();
  // A κ landing within rounding of an interval end can fail the Cholesky
  // check that defines feasibility; such draws are redrawn, which conditions
  // on the check's own (marginally smaller) region.
  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Vector alpha = sample_unit_sphere(k, rng);
    const Vector c_inv_alpha = apply_c_inverse(part, alpha);
    const double precision = alpha.dot(c_inv_alpha);
    const double mu = -(part.s12.dot(alpha) + part.beta.dot(c_inv_alpha)) / precision;
    const double sigma = 1.0 / std::sqrt(precision);
    const Interval range = hit_and_run_interval(alpha, part.beta, part.omega11_inv, part.gamma);
    const double kappa = sample_truncated_normal(mu, sigma, range.lo, range.hi, rng);
    Vector candidate = part.beta + kappa * alpha;
    if (bordered_pd(part, candidate, part.omega22)) return candidate;
  }
  return part.beta;
}

double update_gamma(const ColumnPartition& part, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("update_gamma: n must be positive");
  return sample_gamma(0.5 * n + 1.0, 0.5 * part.s22 + part.lambda22, rng);
}

LambdaColumn update_lambda_column(const ColumnPartition& /*part*/, const Vector& beta, double omega22,
                                  double r, double s, const Clamps& clamps, RngStream& rng) {
  if (!(r > 0.0) || !(s > 0.0)) throw std::invalid_argument("update_lambda_column: r and s must be positive");
  const auto clamp = [&](double v) { return std::clamp(v, clamps.lambda_min, clamps.lambda_max); };
  LambdaColumn out{Vector(beta.size()), 0.0};
  for (Index j = 0; j < beta.size(); ++j) out.lambda12[j] = clamp(sample_gamma(r + 1.0, s + std::abs(beta[j]), rng));
  out.lambda22 = clamp(sample_gamma(r + 1.0, s + omega22, rng));
  return out;
}

Vector update_tau_column(const Vector& lambda12, const Vector& beta, const Clamps& clamps, RngStream& rng) {
  if (lambda12.size() != beta.size()) throw std::invalid_argument("update_tau_column: dimension mismatch");
  Vector tau(beta.size());
  for (Index j = 0; j < beta.size(); ++j) {
    const double lam = lambda12[j];
    if (!(lam > 0.0)) throw std::invalid_argument("update_tau_column: lambda must be positive");
    const double mean = lam / std::max(std::abs(beta[j]), clamps.omega_floor);
    const double upsilon = sample_inverse_gaussian(mean, lam * lam, rng);
    tau[j] = std::clamp(1.0 / upsilon, clamps.tau_min, clamps.tau_max);
  }
  return tau;
}

namespace {

void update_column(GibbsState& state, Index i, const SweepOptions& options, bool skip_beta,
                   ViolationAudit& audit, RngStream& rng) {
  const Index p = state.omega.dim();
  const Index k = p - 1;
  std::string stage = "partition";
  try {
    const ColumnPartition part = make_partition(state, i, options.kind);

    stage = "beta";
    Vector beta = part.beta;
    if (!skip_beta) {
      beta = options.kind == SamplerKind::hrs ? hrs_update_beta(part, rng) : bgs_update_beta(part, rng);
    }
    const bool ok_beta = bordered_pd(part, beta, part.omega22);

    stage = "gamma";
    const double gamma = update_gamma(part, state.n, rng);
    const double omega22 = gamma + quad_form(beta, part.omega11_inv);
    const bool ok_gamma = bordered_pd(part, beta, omega22);

    ++audit.updates_total;
    if (!ok_beta) ++audit.by_column_stage[std::string(kStageAfterBeta)];
    if (!ok_gamma) ++audit.by_column_stage[std::string(kStageAfterGamma)];
    if (!ok_beta || !ok_gamma) {
      ++audit.violations;
      if (options.kind == SamplerKind::hrs) {
        stage = ok_beta ? std::string(kStageAfterGamma) : std::string(kStageAfterBeta);
        throw NotPositiveDefinite("precision matrix lost positive definiteness");
      }
    }

    stage = "lambda";
    const LambdaColumn lam =
        update_lambda_column(part, beta, omega22, state.r, state.s, options.clamps, rng);
    stage = "tau";
    const Vector tau = update_tau_column(lam.lambda12, beta, options.clamps, rng);

    // Permuted position m holds original index m, except m == i which holds p-1.
    for (Index m = 0; m < k; ++m) {
      const Index orig = (m == i) ? k : m;
      state.omega.set(orig, i, beta[m]);
      state.lambda.set(orig, i, lam.lambda12[m]);
      state.tau.set(orig, i, tau[m]);
    }
    state.omega.set(i, i, omega22);
    state.lambda.set(i, i, lam.lambda22);
  } catch (const SamplerError&) {
    throw;
  } catch (const std::exception& e) {
    throw SamplerError(i, stage, e.what());
  }
}

}  // namespace

void sweep(GibbsState& state, const SweepOptions& options, ViolationAudit& audit, RngStream& rng) {
  const Index p = state.omega.dim();
  for (Index t = 0; t < p; ++t) {
    const Index i = options.order == ColumnOrder::ascending ? t : p - 1 - t;
    update_column(state, i, options, options.skip_first_beta && t == 0, audit, rng);
  }
}

void ChainConfig::validate() const {
  if (burn_in < 0) throw std::invalid_argument("burn-in must be non-negative");
  if (draws < 1) throw std::invalid_argument("draws must be positive");
  if (thin < 1) throw std::invalid_argument("thinning must be positive");
  if (!(r > 0.0) || !(s > 0.0)) throw std::invalid_argument("r and s must be positive");
  if (!(clamps.lambda_min > 0.0) || clamps.lambda_min > clamps.lambda_max ||
      !(clamps.tau_min > 0.0) || clamps.tau_min > clamps.tau_max || !(clamps.omega_floor > 0.0)) {
    throw std::invalid_argument("invalid clamp bounds");
  }
}

ChainOutput run_chain(const SymMatrix& scatter, int n, const ChainConfig& config, RngStream& rng) {
  config.validate();
  if (scatter.dim() < 2) throw std::invalid_argument("run_chain: at least two variables are required");
  const auto start = std::chrono::steady_clock::now();

  GibbsState state = GibbsState::initial(scatter, n, config.r, config.s);
  SweepOptions options{config.kind, config.order, config.clamps, true};
  ViolationAudit audit;
  PosteriorMeanAccumulator mean;
  std::vector<SymMatrix> draws;

  const int total = config.burn_in + config.draws;
  for (int t = 0; t < total; ++t) {
    sweep(state, options, audit, rng);
    options.skip_first_beta = false;
    const int retained = t - config.burn_in;
    if (retained >= 0 && retained % config.thin == 0) {
      mean.add(state.omega);
      if (config.store_draws) draws.push_back(state.omega);
    }
  }

  const EstimateSummary summary = mean.summary();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return ChainOutput{summary.omega_hat, summary.draws_used, std::move(draws), std::move(audit), seconds};
}

}  // namespace bglasso
