#include "qgain/bures.hpp"

#include <cmath>
#include <string>

#include "qgain/errors.hpp"
#include "qgain/fisher.hpp"

namespace qgain {

EcbResult min_fidelity_quantum(double N, int M, const GainPair& pair) {
  if (!(N >= 0.0) || !std::isfinite(N)) throw domain_error("min_fidelity_quantum: N must be finite and >= 0");
  if (M < 1) throw domain_error("min_fidelity_quantum: M must be >= 1");
  double lo = std::floor(N);
  double frac = N - lo;
  // snap to an integer budget so representation noise never creates a
  // spurious ⌈N⌉ component
  if (frac < 1e-12) {
    frac = 0.0;
  } else if (frac > 1.0 - 1e-12) {
    lo += 1.0;
    frac = 0.0;
  }
  const double nu = pair.nu;
  double nu_m = std::pow(nu, static_cast<double>(M));
  double nu_lo = std::pow(nu, lo);
  double fid = frac == 0.0 ? nu_m * nu_lo
                           : nu_m * ((1.0 - frac) * nu_lo + frac * nu_lo * nu);
  EcbResult out;
  out.min_fidelity = fid;
  out.ecb_distance = std::sqrt(std::max(0.0, 1.0 - fid));
  out.support_lo = static_cast<long long>(lo);
  out.support_hi = frac == 0.0 ? out.support_lo : out.support_lo + 1;
  out.weight_lo = 1.0 - frac;
  out.weight_hi = frac;
  return out;
}

double min_fidelity_classical(double N, int M, const GainPair& pair) {
  return fidelity_coherent(N, M, pair);
}

bool nds_fidelity_lower_bound_check(const std::vector<double>& p, double N, int M,
                                    const GainPair& pair) {
  double mean = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
  if (std::fabs(mean - N) > 1e-9)
    throw domain_error("nds_fidelity_lower_bound_check: pmf mean " + std::to_string(mean) +
                       " does not match N = " + std::to_string(N));
  return fidelity_nds(p, M, pair) >= min_fidelity_quantum(N, M, pair).min_fidelity - 1e-12;
}

namespace testing {

std::vector<double> random_pmf_with_mean(double N, PhiloxStream& rng) {
  if (!(N > 0.0)) throw domain_error("random_pmf_with_mean: N must be > 0");
  const std::size_t size = 2 * static_cast<std::size_t>(std::ceil(N)) + 4;  // {0..2⌈N⌉+3}
  std::vector<double> q(size);
  double norm = 0.0;
  for (double& v : q) {
    v = sample_gamma(1.0, rng);  // Dirichlet(1,...,1) via normalized exponentials
    norm += v;
  }
  for (double& v : q) v /= norm;

  // tilt p_n ∝ q_n x^n so the mean lands exactly on N; the mean is
  // monotone increasing in x, so bisection always closes
  auto mean_at = [&](double x) {
    double m = 0.0, z = 0.0, xp = 1.0;
    for (std::size_t n = 0; n < size; ++n) {
      m += static_cast<double>(n) * q[n] * xp;
      z += q[n] * xp;
      xp *= x;
    }
    return m / z;
  };
  double lo = 1e-9, hi = 1.0;
  while (mean_at(hi) < N) {
    hi *= 2.0;
    if (hi > 1e12) throw numeric_error("random_pmf_with_mean: tilt failed to bracket");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mean_at(mid) < N ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  std::vector<double> p(size);
  double z = 0.0, xp = 1.0;
  for (std::size_t n = 0; n < size; ++n) {
    p[n] = q[n] * xp;
    z += p[n];
    xp *= x;
  }
  for (double& v : p) v /= z;
  // absorb the residual tilt error into an exact two-point correction on
  // the end bins so the mean is N to machine precision
  double mean = 0.0;
  for (std::size_t n = 0; n < size; ++n) mean += static_cast<double>(n) * p[n];
  double shift = (N - mean) / static_cast<double>(size - 1);
  if (p[0] - shift >= 0.0 && p[size - 1] + shift >= 0.0) {
    p[0] -= shift;
    p[size - 1] += shift;
  }
  return p;
}

}  // namespace testing

}  // namespace qgain
