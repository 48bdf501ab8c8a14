#include "qgain/fisher.hpp"

#include <cmath>
#include <string>

#include "qgain/errors.hpp"
#include "qgain/numerics.hpp"

namespace qgain {

namespace {

constexpr double kProbFloor = 1e-300;

void require_probe(double N, int M) {
  if (!(N >= 0.0) || !std::isfinite(N)) throw domain_error("probe photons N must be finite and >= 0");
  if (M < 1) throw domain_error("probe modes M must be >= 1");
}

void require_above_unit_gain(const Gain& g, const char* what) {
  if (g.g() <= 1.0)
    throw singularity_error(std::string(what) + " diverges at G = 1; use the wrt_tau form");
}

}  // namespace

FisherValue convert(const FisherValue& fi, Parameter target, const Gain& g) {
  if (fi.parameter == target) return fi;
  const double G = g.g();
  if (target == Parameter::wrt_G) {
    require_above_unit_gain(g, "Fisher information with respect to G");
    return {fi.value / (4.0 * G * (G - 1.0)), Parameter::wrt_G};
  }
  return {fi.value * 4.0 * G * (G - 1.0), Parameter::wrt_tau};
}

FisherValue qfi_nds(double N, int M, const Gain& g) {
  require_probe(N, M);
  require_above_unit_gain(g, "qfi_nds");
  const double G = g.g();
  return {(N + M) / (G * (G - 1.0)), Parameter::wrt_G};
}

FisherValue qfi_coherent(double N, int M, const Gain& g) {
  require_probe(N, M);
  require_above_unit_gain(g, "qfi_coherent");
  const double G = g.g();
  return {N / (G * (2.0 * G - 1.0)) + M / (G * (G - 1.0)), Parameter::wrt_G};
}

FisherValue fi_homodyne(double N, int M, const Gain& g) {
  require_probe(N, M);
  const double G = g.g();
  double q = 2.0 * G - 1.0;
  return {N / (G * q) + 2.0 * M / (q * q), Parameter::wrt_G};
}

FisherValue fi_heterodyne(double N, int M, const Gain& g) {
  require_probe(N, M);
  const double G = g.g();
  return {(0.5 * N + M) / (G * G), Parameter::wrt_G};
}

FisherValue qfi_coherent_lossy(double N, int M, const Gain& g, const DetectorSpec& det) {
  require_probe(N, M);
  require_above_unit_gain(g, "qfi_coherent_lossy");
  const double G = g.g(), eta = det.eta_d;
  double n_term = eta * N / (G * (2.0 * eta * (G - 1.0) + 1.0));
  double m_term = eta * M / ((G - 1.0) * (eta * (G - 1.0) + 1.0));
  return {n_term + m_term, Parameter::wrt_G};
}

FisherValue fi_schmidt_counting(double N, int M) {
  require_probe(N, M);
  return {4.0 * (N + M), Parameter::wrt_tau};
}

namespace {

constexpr long long kMaxSeriesTerms = 200000;

// smallest a_max with NB(r, 1/G) cumulative mass >= 1 - tol
long long nb_truncation_order(long long r, double G, double tol) {
  const double log_p = -std::log(G);
  const double log_q = std::log1p(-1.0 / G);
  const double rd = static_cast<double>(r);
  double cum = 0.0;
  for (long long a = 0; a <= kMaxSeriesTerms; ++a) {
    double ad = static_cast<double>(a);
    cum += std::exp(lchoose(ad + rd - 1.0, ad) + ad * log_q + rd * log_p);
    if (cum >= 1.0 - tol) return a;
  }
  throw numeric_error("qfi_number_lossy: series did not converge within term budget");
}

struct SeriesPoint {
  double p;    // P_τ(k)
  double d1;   // ∂_τ P_τ(k)
  double d2;   // ∂²_τ P_τ(k)
};

// One k-bin of the count pmf and its τ-derivatives. Every a-term carries
// C(n+a,a) C(n+a,k) η^k (1−η)^(n+a−k); the τ-dependence per derivative
// order is sech^(2(n+1+j))τ · tanh^(2a−j)τ times a polynomial in a.
SeriesPoint series_point(long long n, long long k, long long a_max, double G,
                         double eta) {
  const double s2 = G - 1.0;               // sinh²τ
  const double log_sech2 = -std::log(G);   // ln sech²τ
  const double log_tanh = 0.5 * (std::log(G - 1.0) - std::log(G));
  const double log_eta = std::log(eta);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);

  const bool lossless = eta == 1.0;
  const double log_omega = lossless ? 0.0 : std::log1p(-eta);

  long long a_lo = std::max(k - n, 0ll);
  long long a_hi = a_max;
  if (lossless) {
    if (k < n) return {0.0, 0.0, 0.0};
    a_hi = std::min(a_hi, k - n);  // only a = k - n survives (1−η)^(n+a−k)
  }

  SeriesPoint out{0.0, 0.0, 0.0};
  for (long long a = a_lo; a <= a_hi; ++a) {
    double ad = static_cast<double>(a);
    double log_common = lchoose(nd + ad, ad) + lchoose(nd + ad, kd) + kd * log_eta;
    if (!lossless) log_common += (nd + ad - kd) * log_omega;

    out.p += std::exp(log_common + (nd + 1.0) * log_sech2 + 2.0 * ad * log_tanh);
    double poly1 = ad - (nd + 1.0) * s2;
    out.d1 += 2.0 * poly1 *
              std::exp(log_common + (nd + 2.0) * log_sech2 + (2.0 * ad - 1.0) * log_tanh);
    double poly2 = 2.0 * (nd + 1.0) * (nd + 1.0) * s2 * s2 -
                   (4.0 * ad * nd + nd + 6.0 * ad + 1.0) * s2 + 2.0 * ad * ad - ad;
    out.d2 += 2.0 * poly2 *
              std::exp(log_common + (nd + 3.0) * log_sech2 + (2.0 * ad - 2.0) * log_tanh);
  }
  return out;
}

}  // namespace

NumberLossyQfi qfi_number_lossy(long long n, const Gain& g, const DetectorSpec& det,
                                double tol) {
  if (n < 0) throw domain_error("qfi_number_lossy: n must be >= 0");
  if (!(tol > 0.0) || !(tol <= 1e-6))
    throw domain_error("qfi_number_lossy: tol must lie in (0, 1e-6]");
  require_above_unit_gain(g, "qfi_number_lossy");
  const double G = g.g();
  // the mass-certified order leaves an a²-weighted tail in the information
  // series; doubling it squares the geometric tail factor, which buries that
  // residual far below tol for a few extra milliseconds at worst
  long long a_max = 2 * nb_truncation_order(n + 1, G, tol) + 32;
  double k_tau = 0.0;
  for (long long k = 0; k <= n + a_max; ++k) {
    SeriesPoint pt = series_point(n, k, a_max, G, det.eta_d);
    if (pt.p < kProbFloor) continue;
    k_tau += pt.d1 * pt.d1 / pt.p - pt.d2;
  }
  return {{k_tau, Parameter::wrt_tau}, {k_tau / (4.0 * G * (G - 1.0)), Parameter::wrt_G}};
}

NumberLossyQfi qfi_number_lossy(const std::vector<long long>& n_vec, const Gain& g,
                                const DetectorSpec& det, double tol) {
  if (n_vec.empty()) throw domain_error("qfi_number_lossy: empty mode vector");
  double k_tau = 0.0;
  for (long long n : n_vec) k_tau += qfi_number_lossy(n, g, det, tol).wrt_tau.value;
  const double G = g.g();
  return {{k_tau, Parameter::wrt_tau}, {k_tau / (4.0 * G * (G - 1.0)), Parameter::wrt_G}};
}

double fidelity_nds(const std::vector<double>& p, int M, const GainPair& pair) {
  if (p.empty()) throw domain_error("fidelity_nds: empty pmf");
  if (M < 1) throw domain_error("fidelity_nds: M must be >= 1");
  double norm = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw domain_error("fidelity_nds: negative pmf entry");
    norm += v;
  }
  if (std::fabs(norm - 1.0) > 1e-12) throw domain_error("fidelity_nds: pmf not normalized");
  double nu_pow = std::pow(pair.nu, static_cast<double>(M));
  double fid = 0.0;
  for (double v : p) {
    fid += v * nu_pow;
    nu_pow *= pair.nu;
  }
  return fid;
}

double fidelity_coherent(double N, int M, const GainPair& pair) {
  require_probe(N, M);
  const double G = pair.g.g(), Gp = pair.g_prime.g();
  double delta = std::sqrt(Gp) - std::sqrt(G);
  double expo = -N * delta * delta / (2.0 * (G + Gp - 1.0));
  return std::pow(pair.nu, static_cast<double>(M)) * std::exp(expo);
}

FisherValue qfi_from_fidelity(const std::function<double(double)>& fidelity_curve,
                              double theta, double step, Parameter parameter,
                              FdDiagnostics* diag) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw domain_error("qfi_from_fidelity: step must be finite and > 0");
  const double f0 = fidelity_curve(theta);
  auto second_diff = [&](double h) {
    return (fidelity_curve(theta + h) - 2.0 * f0 + fidelity_curve(theta - h)) / (h * h);
  };
  const double coarse = second_diff(step);
  const double fine = second_diff(0.5 * step);
  const double rich = (4.0 * fine - coarse) / 3.0;
  if (diag) *diag = {coarse, fine, rich, false};
  if (coarse == 0.0 && fine == 0.0) return {0.0, parameter};

  double disagreement = std::fabs(fine - coarse) / std::max(std::fabs(rich), 1e-30);
  if (!std::isfinite(rich) || disagreement > 1e-2)
    throw numeric_error(
        "qfi_from_fidelity: finite-difference levels disagree (step likely in the "
        "roundoff regime): D(h) = " + std::to_string(coarse) +
        ", D(h/2) = " + std::to_string(fine));
  if (diag) diag->flagged = disagreement > 1e-4;

  double value = -4.0 * rich;
  if (value < 0.0) {
    if (-value < 1e-6 * std::max(1.0, std::fabs(4.0 * coarse)))
      value = 0.0;  // flat curve up to roundoff
    else
      throw numeric_error("qfi_from_fidelity: negative curvature; curve is not a "
                          "fidelity maximized at theta");
  }
  return {value, parameter};
}

FisherValue fi_of_pmf_family(const std::function<PhotonNumberDistribution(double)>& family,
                             double theta, double step, Parameter parameter) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw domain_error("fi_of_pmf_family: step must be finite and > 0");
  PhotonNumberDistribution base = family(theta);
  PhotonNumberDistribution ph = family(theta + step);
  PhotonNumberDistribution mh = family(theta - step);
  PhotonNumberDistribution ph2 = family(theta + 0.5 * step);
  PhotonNumberDistribution mh2 = family(theta - 0.5 * step);
  const std::size_t size = base.pmf.size();
  if (ph.pmf.size() != size || mh.pmf.size() != size || ph2.pmf.size() != size ||
      mh2.pmf.size() != size)
    throw domain_error("fi_of_pmf_family: family members have mismatched supports");

  double fi = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    if (base.pmf[k] < kProbFloor) continue;
    double d_coarse = (ph.pmf[k] - mh.pmf[k]) / (2.0 * step);
    double d_fine = (ph2.pmf[k] - mh2.pmf[k]) / step;
    double d = (4.0 * d_fine - d_coarse) / 3.0;
    fi += d * d / base.pmf[k];
  }
  return {fi, parameter};
}

}  // namespace qgain
