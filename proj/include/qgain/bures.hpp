#pragma once

#include <vector>

#include "qgain/params.hpp"
#include "qgain/rng.hpp"

namespace qgain {

/// Minimum output fidelity over probes of energy N on M modes, with the
/// two-point pmf that attains it, and the Bures distance √(1 − F_min).
struct EcbResult {
  double min_fidelity;
  double ecb_distance;
  long long support_lo;  // ⌊N⌋
  long long support_hi;  // ⌈N⌉
  double weight_lo;      // 1 − {N}
  double weight_hi;      // {N}
};

/// Quantum-optimal minimum fidelity ν^M [(1−{N}) ν^⌊N⌋ + {N} ν^⌈N⌉].
EcbResult min_fidelity_quantum(double N, int M, const GainPair& pair);

/// Classical (coherent-probe) minimum fidelity; equals the coherent-state
/// output fidelity at total energy N.
double min_fidelity_classical(double N, int M, const GainPair& pair);

/// True iff the NDS output fidelity of pmf p (which must have mean N) is
/// at least the quantum minimum at energy N, up to 1e−12 slack.
bool nds_fidelity_lower_bound_check(const std::vector<double>& p, double N, int M,
                                    const GainPair& pair);

namespace testing {

/// Random pmf with exact mean N on support {0, ..., 2⌈N⌉+3}: Dirichlet
/// weights, exponentially tilted to the requested mean. Test
/// infrastructure only, not part of the public surface.
std::vector<double> random_pmf_with_mean(double N, PhiloxStream& rng);

}  // namespace testing

}  // namespace qgain
