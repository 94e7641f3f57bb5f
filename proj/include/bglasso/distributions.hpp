#pragma once

#include "bglasso/matrix_core.hpp"

#include <cstdint>
#include <limits>
#include <random>

namespace bglasso {

/// A reproducible random stream identified by (seed, stream_id).
///
/// The engine is mt19937_64 seeded through std::seed_seq with the four
/// 32-bit halves of seed and stream_id; both algorithms are fixed by the
/// standard, so a given pair yields the same sequence on every platform.
/// Distinct stream ids give decorrelated engine states, which is how
/// replications are parallelized without sharing a generator.
///
/// A stream must be owned by one worker at a time.
class RngStream {
 public:
  using engine_type = std::mt19937_64;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal.
  double normal();

  engine_type& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  engine_type engine_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Gamma with density ∝ x^(shape-1) exp(-rate·x). The second parameter is a
/// RATE, not a scale: mean = shape / rate.
double sample_gamma(double shape, double rate, RngStream& rng);

/// Inverse Gaussian IG(mean, shape), variance mean³/shape, drawn with the
/// Michael–Schucany–Haas transformation.
double sample_inverse_gaussian(double mean, double shape, RngStream& rng);

/// N(mu, sigma²) conditioned on the open interval (lo, hi). Either bound may
/// be ±kInf. Throws std::invalid_argument("empty truncation interval") if
/// lo >= hi.
double sample_truncated_normal(double mu, double sigma, double lo, double hi, RngStream& rng);

/// Uniformly distributed direction z/‖z‖ with z ~ N(0, I).
Vector sample_unit_sphere(Index dim, RngStream& rng);

/// Draw from N(mean, cov). Throws NotPositiveDefinite if cov fails pd_check.
Vector sample_mvn(const Vector& mean, const SymMatrix& cov, RngStream& rng);

/// Draw from N(precision⁻¹·shift, precision⁻¹) given the Cholesky factor of
/// the precision matrix. Used where the precision is the natural quantity.
Vector sample_mvn_canonical(const Vector& shift, const CholeskyFactor& precision, RngStream& rng);

}  // namespace bglasso
