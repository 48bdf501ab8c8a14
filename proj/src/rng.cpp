#include "qgain/rng.hpp"

#include <cmath>
#include <string>

namespace qgain {

double sample_gamma(double shape, PhiloxStream& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw domain_error("sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    double u = rng.next_double_oc();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  NormalSource normal;
  for (;;) {
    double x, v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.next_double_oc();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

namespace {

long long poisson_inversion(double mean, PhiloxStream& rng) {
  // multiplicative: count uniforms until the running product drops under e^-mean
  const double limit = std::exp(-mean);
  double prod = rng.next_double_oc();
  long long k = 0;
  while (prod > limit) {
    prod *= rng.next_double_oc();
    ++k;
  }
  return k;
}

long long poisson_ptrs(double mean, PhiloxStream& rng) {
  // Hörmann's transformed rejection with squeeze, valid for mean >= 10
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = rng.next_double() - 0.5;
    double v = rng.next_double_oc();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_mean - mean - std::lgamma(kf + 1.0))
      return static_cast<long long>(kf);
  }
}

}  // namespace

long long sample_poisson(double mean, PhiloxStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw domain_error("sample_poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean > 1e15) throw domain_error("sample_poisson: mean too large");
  if (mean < 10.0) return poisson_inversion(mean, rng);
  return poisson_ptrs(mean, rng);
}

long long sample_binomial(long long n, double p, PhiloxStream& rng) {
  if (n < 0) throw domain_error("sample_binomial: n must be >= 0");
  if (!(p >= 0.0) || !(p <= 1.0))
    throw domain_error("sample_binomial: p must lie in [0, 1]");
  if (p == 1.0) return n;
  if (p == 0.0) return 0;
  long long count = 0;
  for (long long i = 0; i < n; ++i)
    if (rng.next_double() < p) ++count;
  return count;
}

}  // namespace qgain
