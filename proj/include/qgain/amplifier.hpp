#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "qgain/params.hpp"

namespace qgain {

/// Truncated photon-count pmf with a certified bound on the omitted mass.
struct PhotonNumberDistribution {
  std::vector<double> pmf;  // pmf[k] = P(count = k), k = 0..pmf.size()-1
  double tail_bound = 0.0;  // certified upper bound on mass beyond the support
};

/// Gaussian description of the amplifier output for one coherent mode
/// after detection loss: coherent amplitude √(η_d G N_m) on top of
/// thermal occupation η_d(G−1).
struct DisplacedThermalParams {
  double mean_amplitude;
  double thermal_occupation;
};

/// Negative binomial pmf NB(r, p) at k: C(k+r−1, k)(1−p)^k p^r,
/// evaluated in log space.
double nb_pmf(long long r, double p, long long k);

/// Probability that the amplifier adds `a` photons to an n-photon Fock
/// input: NB(n+1, 1/G) at a. Exact Kronecker delta at G = 1.
double fock_transition_prob(long long n, long long a, const Gain& g);

/// Both sides of the composition identity
///   Σ_{a_1+...+a_M = a} Π_m C(n_m + a_m, a_m) = C(Σ n_m + M − 1 + a, a),
/// the left side by exhaustive enumeration. Throws on 64-bit overflow.
std::pair<std::uint64_t, std::uint64_t> lemma_identity_check(
    const std::vector<long long>& n_vec, long long a);

/// Photocount pmf for an n-photon Fock input through gain G and a
/// detector of efficiency η_d, truncated to certified tail mass ≤ tol.
PhotonNumberDistribution lossy_count_distribution(long long n, const Gain& g,
                                                  const DetectorSpec& det,
                                                  double tol = 1e-12);

/// Same pmf evaluated on the fixed support k = 0..k_max (no trimming of
/// the count axis); used by finite-difference oracles that need a family
/// of distributions on one common support.
PhotonNumberDistribution lossy_count_distribution_fixed(long long n, const Gain& g,
                                                        const DetectorSpec& det,
                                                        double tol, std::size_t k_max);

DisplacedThermalParams displaced_thermal_params(double mode_energy, const Gain& g,
                                                const DetectorSpec& det);

// Single-mode probe descriptors for moment formulas.
struct NumberMode {
  long long n;
};
struct CoherentMode {
  double mean_photons;
};
using SingleMode = std::variant<NumberMode, CoherentMode>;

struct Moments {
  double mean;
  double second_moment;
};

/// Heisenberg-picture photocount moments for one mode: mean η_d⟨N_out⟩ and
/// ⟨Y²⟩ = η_d²⟨N_out²⟩ + η_d(1−η_d)⟨N_out⟩ with
/// ⟨N_out⟩ = G⟨N_in⟩ + G − 1 and
/// ⟨N_out²⟩ = G²⟨N_in²⟩ + 3G(G−1)⟨N_in⟩ + (G−1)(2G−1).
Moments count_moments(const SingleMode& mode, const Gain& g, const DetectorSpec& det);

}  // namespace qgain
