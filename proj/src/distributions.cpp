#include "bglasso/distributions.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bglasso {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_([&] {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id),
                          static_cast<std::uint32_t>(stream_id >> 32)};
        return engine_type(seq);
      }()) {}

double RngStream::uniform() {
  // 53 random bits centred in their cell: never exactly 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(engine_);
}

double sample_gamma(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw std::invalid_argument("sample_gamma: shape and rate must be positive and finite");
  }
  boost::random::gamma_distribution<double> dist(shape, 1.0 / rate);
  double x = dist(rng.engine());
  // Boost can return exactly 0 for tiny shapes; keep the draw in the support.
  while (!(x > 0.0)) x = dist(rng.engine());
  return x;
}

double sample_inverse_gaussian(double mean, double shape, RngStream& rng) {
  if (!(mean > 0.0) || !(shape > 0.0) || !std::isfinite(mean) || !std::isfinite(shape)) {
    throw std::invalid_argument("sample_inverse_gaussian: mean and shape must be positive and finite");
  }
  const double nu = rng.normal();
  const double t = mean * nu * nu / (2.0 * shape);
  // Smaller root of the transformation, written without the cancellation in
  // mean + mean·t - mean·sqrt(t² + 2t).
  const double x = mean / (1.0 + t + std::sqrt(t * (t + 2.0)));
  if (rng.uniform() * (mean + x) <= mean) return x;
  return mean * (mean / x);
}

namespace {

constexpr double kTailStart = 5.0;

// Φ(x) and the upper tail Q(x) = 1 - Φ(x), each accurate in its own tail.
double std_cdf(double x) { return 0.5 * std::erfc(-x / M_SQRT2); }
double std_upper(double x) { return 0.5 * std::erfc(x / M_SQRT2); }

// Uniform proposal on [a, b], accepted with exp((m² - z²)/2) where m is the
// point of [a, b] closest to zero. Efficient whenever b - a is small.
double uniform_rejection(double a, double b, RngStream& rng) {
  const double m = (a > 0.0) ? a : (b < 0.0 ? b : 0.0);
  for (;;) {
    const double z = a + (b - a) * rng.uniform();
    if (!(z > a && z < b)) continue;
    if (std::log(rng.uniform()) <= 0.5 * (m * m - z * z)) return z;
  }
}

// Right tail a >= kTailStart, b possibly infinite. Translated exponential
// proposal with the optimal rate, falling back to a uniform proposal when the
// interval is narrow compared with the exponential's scale.
double right_tail(double a, double b, RngStream& rng) {
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  if (std::isfinite(b) && rate * (b - a) < 1.0) return uniform_rejection(a, b, rng);
  for (;;) {
    const double z = a - std::log(rng.uniform()) / rate;
    if (!(z > a && z < b)) continue;
    const double d = z - rate;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
  }
}

// erfc⁻¹(2u) with the endpoints mapped to NaN, which the caller rejects.
double erfc_inv_twice(double u) {
  const double arg = 2.0 * u;
  if (!(arg > 0.0 && arg < 2.0)) return std::numeric_limits<double>::quiet_NaN();
  return boost::math::erfc_inv(arg);
}

double inverse_cdf(double a, double b, RngStream& rng) {
  if (a > 0.0) {
    const double qa = std_upper(a);
    const double qb = std_upper(b);
    const double u = qb + (qa - qb) * rng.uniform();
    return M_SQRT2 * erfc_inv_twice(u);
  }
  if (b < 0.0) return -inverse_cdf(-b, -a, rng);
  const double pa = std_cdf(a);
  const double pb = std_cdf(b);
  const double u = pa + (pb - pa) * rng.uniform();
  return -M_SQRT2 * erfc_inv_twice(u);
}

double standard_truncated(double a, double b, RngStream& rng) {
  if (a >= kTailStart) return right_tail(a, b, rng);
  if (b <= -kTailStart) return -right_tail(-b, -a, rng);
  // Rounding in the CDF inversion can land on a bound when the interval is
  // very narrow; those cases go to the exact rejection sampler.
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double z = inverse_cdf(a, b, rng);
    if (z > a && z < b) return z;
  }
  return uniform_rejection(a, b, rng);
}

}  // namespace

double sample_truncated_normal(double mu, double sigma, double lo, double hi, RngStream& rng) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw std::invalid_argument("sample_truncated_normal: sigma must be positive and finite");
  }
  if (!(lo < hi)) throw std::invalid_argument("empty truncation interval");
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  if (!(a < b)) throw std::invalid_argument("empty truncation interval");
  for (;;) {
    const double x = mu + sigma * standard_truncated(a, b, rng);
    // Mapping back can round onto a bound for extreme mu/sigma ratios.
    if (x > lo && x < hi) return x;
  }
}

Vector sample_unit_sphere(Index dim, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("sample_unit_sphere: dimension must be positive");
  Vector z(dim);
  for (;;) {
    for (Index k = 0; k < dim; ++k) z[k] = rng.normal();
    const double norm = z.norm();
    if (norm > 0.0) return z / norm;
  }
}

Vector sample_mvn(const Vector& mean, const SymMatrix& cov, RngStream& rng) {
  if (mean.size() != cov.dim()) throw std::invalid_argument("sample_mvn: dimension mismatch");
  const auto factor = pd_check(cov);
  if (!factor) throw NotPositiveDefinite("sample_mvn: covariance not positive definite");
  Vector z(mean.size());
  for (Index k = 0; k < z.size(); ++k) z[k] = rng.normal();
  return mean + factor->lower.triangularView<Eigen::Lower>() * z;
}

Vector sample_mvn_canonical(const Vector& shift, const CholeskyFactor& precision, RngStream& rng) {
  if (shift.size() != precision.dim()) {
    throw std::invalid_argument("sample_mvn_canonical: dimension mismatch");
  }
  Vector z(shift.size());
  for (Index k = 0; k < z.size(); ++k) z[k] = rng.normal();
  // mean = Q⁻¹ shift; noise = L⁻ᵀ z has covariance (L Lᵀ)⁻¹.
  const Vector w = precision.lower.triangularView<Eigen::Lower>().solve(shift);
  return precision.lower.transpose().triangularView<Eigen::Upper>().solve(w + z);
}

}  // namespace bglasso
