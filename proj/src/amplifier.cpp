#include "qgain/amplifier.hpp"

#include <cmath>
#include <string>

#include "qgain/errors.hpp"
#include "qgain/numerics.hpp"

namespace qgain {

double nb_pmf(long long r, double p, long long k) {
  if (r < 1) throw domain_error("nb_pmf: r must be a positive integer");
  if (!(p > 0.0) || !(p <= 1.0)) throw domain_error("nb_pmf: p must lie in (0, 1]");
  if (k < 0) throw domain_error("nb_pmf: k must be >= 0");
  if (p == 1.0) return k == 0 ? 1.0 : 0.0;
  double rd = static_cast<double>(r), kd = static_cast<double>(k);
  return std::exp(lchoose(kd + rd - 1.0, kd) + kd * std::log1p(-p) + rd * std::log(p));
}

double fock_transition_prob(long long n, long long a, const Gain& g) {
  if (n < 0 || a < 0) throw domain_error("fock_transition_prob: n, a must be >= 0");
  if (g.g() == 1.0) return a == 0 ? 1.0 : 0.0;
  return nb_pmf(n + 1, 1.0 / g.g(), a);
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw numeric_error("lemma_identity_check: 64-bit overflow in product");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out))
    throw numeric_error("lemma_identity_check: 64-bit overflow in sum");
  return out;
}

// sum over compositions of `rest` into modes m..M-1 of the product of
// per-mode C(n_m + a_m, a_m), times `prefix`
std::uint64_t composition_sum(const std::vector<long long>& n_vec, std::size_t m,
                              long long rest, std::uint64_t prefix) {
  if (m + 1 == n_vec.size()) {
    std::uint64_t c = choose_u64(static_cast<unsigned>(n_vec[m] + rest),
                                 static_cast<unsigned>(rest));
    return checked_mul(prefix, c);
  }
  std::uint64_t total = 0;
  for (long long am = 0; am <= rest; ++am) {
    std::uint64_t c = choose_u64(static_cast<unsigned>(n_vec[m] + am),
                                 static_cast<unsigned>(am));
    total = checked_add(total, composition_sum(n_vec, m + 1, rest - am,
                                               checked_mul(prefix, c)));
  }
  return total;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> lemma_identity_check(
    const std::vector<long long>& n_vec, long long a) {
  if (n_vec.empty()) throw domain_error("lemma_identity_check: empty mode vector");
  if (a < 0) throw domain_error("lemma_identity_check: a must be >= 0");
  long long n_total = 0;
  for (long long nm : n_vec) {
    if (nm < 0) throw domain_error("lemma_identity_check: negative photon number");
    n_total += nm;
  }
  std::uint64_t lhs = composition_sum(n_vec, 0, a, 1);
  long long m_count = static_cast<long long>(n_vec.size());
  std::uint64_t rhs = choose_u64(static_cast<unsigned>(n_total + m_count - 1 + a),
                                 static_cast<unsigned>(a));
  return {lhs, rhs};
}

namespace {

constexpr long long kMaxSeriesTerms = 200000;

// smallest a_max with NB(r, p) tail mass <= tol; also returns the weights
std::vector<double> nb_weights_to_tail(long long r, double p, double tol) {
  const double log_p = std::log(p), log_q = std::log1p(-p);
  const double rd = static_cast<double>(r);
  std::vector<double> w;
  double cum = 0.0;
  for (long long a = 0; a <= kMaxSeriesTerms; ++a) {
    double ad = static_cast<double>(a);
    double term = std::exp(lchoose(ad + rd - 1.0, ad) + ad * log_q + rd * log_p);
    w.push_back(term);
    cum += term;
    if (cum >= 1.0 - tol) return w;
  }
  throw numeric_error("lossy_count_distribution: amplifier series needs more than " +
                      std::to_string(kMaxSeriesTerms) + " terms");
}

void validate_count_args(long long n, double tol) {
  if (n < 0) throw domain_error("lossy_count_distribution: n must be >= 0");
  if (!(tol > 0.0) || !(tol <= 1e-6))
    throw domain_error("lossy_count_distribution: tol must lie in (0, 1e-6]");
}

// full (untrimmed) mixture pmf over k = 0..n+a_max
std::vector<double> mixture_pmf(long long n, const Gain& g, double eta, double tol) {
  const double log_eta = std::log(eta);
  std::vector<double> weights = nb_weights_to_tail(n + 1, 1.0 / g.g(), tol);
  std::vector<double> pmf(n + weights.size(), 0.0);
  if (eta == 1.0) {
    for (std::size_t a = 0; a < weights.size(); ++a) pmf[n + a] = weights[a];
    return pmf;
  }
  const double log_omega = std::log1p(-eta);
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (weights[a] == 0.0) continue;
    const double log_w = std::log(weights[a]);
    const long long m = n + static_cast<long long>(a);
    const double md = static_cast<double>(m);
    for (long long k = 0; k <= m; ++k) {
      double kd = static_cast<double>(k);
      pmf[k] += std::exp(log_w + lchoose(md, kd) + kd * log_eta + (md - kd) * log_omega);
    }
  }
  return pmf;
}

}  // namespace

PhotonNumberDistribution lossy_count_distribution(long long n, const Gain& g,
                                                  const DetectorSpec& det, double tol) {
  validate_count_args(n, tol);
  if (g.g() == 1.0) {
    // pure loss: binomial thinning of the input Fock state
    PhotonNumberDistribution out;
    out.pmf.resize(n + 1, 0.0);
    if (det.eta_d == 1.0) {
      out.pmf[n] = 1.0;
    } else {
      double le = std::log(det.eta_d), lo = std::log1p(-det.eta_d);
      double nd = static_cast<double>(n);
      for (long long k = 0; k <= n; ++k) {
        double kd = static_cast<double>(k);
        out.pmf[k] = std::exp(lchoose(nd, kd) + kd * le + (nd - kd) * lo);
      }
    }
    out.tail_bound = 0.0;
    return out;
  }

  std::vector<double> pmf = mixture_pmf(n, g, det.eta_d, tol / 2.0);
  double total = 0.0;
  for (double v : pmf) total += v;

  // trim the top of the count axis while the certificate still holds
  std::size_t k_max = pmf.size();
  while (k_max > 1 && total - pmf[k_max - 1] >= 1.0 - tol) total -= pmf[--k_max];
  pmf.resize(k_max);

  PhotonNumberDistribution out;
  out.pmf = std::move(pmf);
  out.tail_bound = std::max(0.0, 1.0 - total);
  return out;
}

PhotonNumberDistribution lossy_count_distribution_fixed(long long n, const Gain& g,
                                                        const DetectorSpec& det,
                                                        double tol, std::size_t k_max) {
  validate_count_args(n, tol);
  // same series tolerance as the adaptive variant, so shared bins match exactly
  std::vector<double> pmf = g.g() == 1.0
                                ? lossy_count_distribution(n, g, det, tol).pmf
                                : mixture_pmf(n, g, det.eta_d, tol / 2.0);
  pmf.resize(k_max + 1, 0.0);  // pad, or push excess support into the tail bound
  double total = 0.0;
  for (double v : pmf) total += v;
  PhotonNumberDistribution out;
  out.pmf = std::move(pmf);
  out.tail_bound = std::max(0.0, 1.0 - total);
  return out;
}

DisplacedThermalParams displaced_thermal_params(double mode_energy, const Gain& g,
                                                const DetectorSpec& det) {
  if (!(mode_energy >= 0.0) || !std::isfinite(mode_energy))
    throw domain_error("displaced_thermal_params: mode energy must be finite and >= 0");
  return {std::sqrt(det.eta_d * g.g() * mode_energy), det.eta_d * (g.g() - 1.0)};
}

Moments count_moments(const SingleMode& mode, const Gain& g, const DetectorSpec& det) {
  double n_in, n_in_sq;
  if (const auto* num = std::get_if<NumberMode>(&mode)) {
    if (num->n < 0) throw domain_error("count_moments: n must be >= 0");
    n_in = static_cast<double>(num->n);
    n_in_sq = n_in * n_in;
  } else {
    const auto& coh = std::get<CoherentMode>(mode);
    if (!(coh.mean_photons >= 0.0))
      throw domain_error("count_moments: mode energy must be >= 0");
    n_in = coh.mean_photons;
    n_in_sq = n_in * n_in + n_in;
  }
  const double G = g.g(), eta = det.eta_d;
  double n_out = G * n_in + (G - 1.0);
  double n_out_sq = G * G * n_in_sq + 3.0 * G * (G - 1.0) * n_in + (G - 1.0) * (2.0 * G - 1.0);
  return {eta * n_out, eta * eta * n_out_sq + eta * (1.0 - eta) * n_out};
}

}  // namespace qgain
