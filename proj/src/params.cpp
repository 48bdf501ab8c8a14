#include "qgain/params.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "qgain/errors.hpp"

namespace qgain {

namespace {
constexpr double kGainMax = 1e6;
}

Gain Gain::from_gain(double g) {
  if (!std::isfinite(g) || g < 1.0)
    throw domain_error("Gain: G must be finite and >= 1, got " + std::to_string(g));
  if (g > kGainMax)
    throw domain_error("Gain: G above supported range [1, 1e6]");
  // asinh(sqrt(G-1)) = arccosh(sqrt(G)), accurate all the way down to G = 1
  double tau = std::asinh(std::sqrt(g - 1.0));
  return Gain(g, tau);
}

Gain Gain::from_tau(double tau) {
  if (!std::isfinite(tau) || tau < 0.0)
    throw domain_error("Gain: tau must be finite and >= 0");
  double sh = std::sinh(tau);
  double g = 1.0 + sh * sh;  // cosh²τ without the cancellation of cosh²-0
  // a tau produced by from_gain(1e6) may land a few ulps past the cap
  if (g > kGainMax && g < kGainMax * (1.0 + 1e-12)) g = kGainMax;
  if (g > kGainMax)
    throw domain_error("Gain: cosh²(tau) above supported range [1, 1e6]");
  return Gain(g, tau);
}

double nu_of_pair(const Gain& g, const Gain& g_prime) {
  const double G = g.g(), Gp = g_prime.g();
  if (G == Gp) return 1.0;
  // conjugate form of (√(GG′) − √((G−1)(G′−1)))⁻¹: no cancellation anywhere
  double nu = (std::sqrt(G * Gp) + std::sqrt((G - 1.0) * (Gp - 1.0))) / (G + Gp - 1.0);
  assert(std::fabs(nu - 1.0 / std::cosh(g_prime.tau() - g.tau())) <= 1e-12 * nu);
  return nu;
}

namespace {

ProbeTotals totals_number(const NumberState& s) {
  if (s.n.empty()) throw domain_error("NumberState: empty mode vector");
  double total = 0.0;
  for (long long nm : s.n) {
    if (nm < 0) throw domain_error("NumberState: negative photon number");
    total += static_cast<double>(nm);
  }
  return {total, static_cast<int>(s.n.size())};
}

ProbeTotals totals_coherent(const CoherentState& s) {
  if (s.energies.empty()) throw domain_error("CoherentState: empty mode vector");
  double total = 0.0;
  for (double e : s.energies) {
    if (!(e >= 0.0) || !std::isfinite(e))
      throw domain_error("CoherentState: per-mode energy must be finite and >= 0");
    total += e;
  }
  return {total, static_cast<int>(s.energies.size())};
}

ProbeTotals totals_nds(const NdsTotalDistribution& s) {
  if (s.p.empty()) throw domain_error("NdsTotalDistribution: empty pmf");
  if (s.modes < 1) throw domain_error("NdsTotalDistribution: modes must be >= 1");
  double norm = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < s.p.size(); ++n) {
    if (!(s.p[n] >= 0.0)) throw domain_error("NdsTotalDistribution: negative pmf entry");
    norm += s.p[n];
    mean += static_cast<double>(n) * s.p[n];
  }
  if (std::fabs(norm - 1.0) > 1e-12)
    throw domain_error("NdsTotalDistribution: pmf sums to " + std::to_string(norm) + ", not 1");
  return {mean, s.modes};
}

}  // namespace

ProbeTotals probe_totals(const ProbeSpec& probe) {
  if (const auto* s = std::get_if<NumberState>(&probe)) return totals_number(*s);
  if (const auto* s = std::get_if<CoherentState>(&probe)) return totals_coherent(*s);
  return totals_nds(std::get<NdsTotalDistribution>(probe));
}

DetectorSpec make_detector(double eta_d) {
  if (!(eta_d > 0.0) || !(eta_d <= 1.0) || !std::isfinite(eta_d))
    throw domain_error("DetectorSpec: eta_d must lie in (0, 1]");
  return DetectorSpec{eta_d};
}

}  // namespace qgain
