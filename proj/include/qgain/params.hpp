#pragma once

#include <variant>
#include <vector>

namespace qgain {

/// Amplifier gain G = cosh²τ with its squeeze-parameter alias τ.
///
/// Both representations are fixed at construction so that round trips
/// G ↔ τ are exact: the constructing value is stored verbatim and the
/// companion is derived once. Accepted range G ∈ [1, 1e6].
class Gain {
 public:
  static Gain from_gain(double g);
  static Gain from_tau(double tau);

  double g() const { return g_; }
  double tau() const { return tau_; }

  bool operator==(const Gain& o) const { return g_ == o.g_ && tau_ == o.tau_; }

 private:
  Gain(double g, double tau) : g_(g), tau_(tau) {}
  double g_;
  double tau_;
};

inline double gain_from_tau(double tau) { return Gain::from_tau(tau).g(); }
inline double tau_from_gain(double g) { return Gain::from_gain(g).tau(); }

/// Overlap parameter ν = sech(τ′−τ) of two gains; ν ∈ (0,1], 1 iff G = G′.
double nu_of_pair(const Gain& g, const Gain& g_prime);

/// A pair of gains with their precomputed overlap ν.
struct GainPair {
  Gain g;
  Gain g_prime;
  double nu;

  GainPair(const Gain& a, const Gain& b) : g(a), g_prime(b), nu(nu_of_pair(a, b)) {}
};

// Probe variants. Totals N (photons) and M (modes) are derived, never stored.
struct NumberState {
  std::vector<long long> n;  // per-mode photon numbers
};
struct CoherentState {
  std::vector<double> energies;  // per-mode mean photon numbers N_m
};
struct NdsTotalDistribution {
  std::vector<double> p;  // pmf over total photon number, p[n] = P(N_tot = n)
  int modes = 1;
};
using ProbeSpec = std::variant<NumberState, CoherentState, NdsTotalDistribution>;

struct ProbeTotals {
  double photons;  // N
  int modes;       // M
};

/// Derived totals (N, M); validates the probe (non-empty, normalized pmf, ...).
ProbeTotals probe_totals(const ProbeSpec& probe);

/// Photodetector quantum efficiency η_d ∈ (0, 1].
struct DetectorSpec {
  double eta_d;
};

/// Validating constructor for DetectorSpec.
DetectorSpec make_detector(double eta_d);

}  // namespace qgain
