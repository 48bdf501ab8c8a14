#pragma once

#include <functional>
#include <vector>

#include "qgain/amplifier.hpp"
#include "qgain/params.hpp"

namespace qgain {

enum class Parameter { wrt_G, wrt_tau };

/// Fisher information tagged with the parameter it refers to.
/// K_G = K_τ (∂τ/∂G)² = K_τ / (4G(G−1)).
struct FisherValue {
  double value;
  Parameter parameter;
};

/// Re-express a Fisher value with respect to the other parameter.
FisherValue convert(const FisherValue& fi, Parameter target, const Gain& g);

/// Optimal (NDS-probe) QFI (N+M)/(G(G−1)) with respect to G.
FisherValue qfi_nds(double N, int M, const Gain& g);

/// Coherent-probe QFI N/(G(2G−1)) + M/(G(G−1)) with respect to G.
FisherValue qfi_coherent(double N, int M, const Gain& g);

/// Homodyne FI N/(G(2G−1)) + 2M/(2G−1)²; finite at G = 1.
FisherValue fi_homodyne(double N, int M, const Gain& g);

/// Heterodyne FI (N/2 + M)/G²; finite at G = 1.
FisherValue fi_heterodyne(double N, int M, const Gain& g);

/// Coherent-probe QFI with detector efficiency η_d folded into the output
/// state: η_d N/(G[2η_d(G−1)+1]) + η_d M/((G−1)[η_d(G−1)+1]).
FisherValue qfi_coherent_lossy(double N, int M, const Gain& g, const DetectorSpec& det);

/// FI of per-mode photon counting on amplified number states at unit
/// efficiency: exactly 4(N+M) with respect to τ.
FisherValue fi_schmidt_counting(double N, int M);

struct NumberLossyQfi {
  FisherValue wrt_tau;
  FisherValue wrt_g;
};

/// QFI of the inefficiently detected amplifier output for an n-photon
/// Fock input, from the analytic derivative series of the count pmf:
/// K_τ = Σ_k [P(k)⁻¹ (∂_τ P(k))² − ∂²_τ P(k)]. Requires G > 1.
NumberLossyQfi qfi_number_lossy(long long n, const Gain& g, const DetectorSpec& det,
                                double tol = 1e-12);

/// Multimode number probe: per-mode values summed.
NumberLossyQfi qfi_number_lossy(const std::vector<long long>& n_vec, const Gain& g,
                                const DetectorSpec& det, double tol = 1e-12);

/// Output fidelity for an NDS probe with total-photon pmf p on M signal
/// modes: Σ_n p_n ν^(n+M).
double fidelity_nds(const std::vector<double>& p, int M, const GainPair& pair);

/// Output fidelity for a coherent probe of total energy N on M modes:
/// ν^M exp[−N(√G′ − √G)² / (2(G + G′ − 1))].
double fidelity_coherent(double N, int M, const GainPair& pair);

/// Diagnostics of a Richardson-extrapolated finite difference.
struct FdDiagnostics {
  double coarse = 0.0;      // estimate at step h
  double fine = 0.0;        // estimate at step h/2
  double richardson = 0.0;  // extrapolated value
  bool flagged = false;     // levels disagree beyond 1e-4 relative
};

/// Universal QFI oracle: −4 ∂²_θ′ F(θ, θ′)|_θ′=θ by second central
/// difference with two-level Richardson extrapolation. The returned value
/// is tagged with `parameter`, which names what θ is.
FisherValue qfi_from_fidelity(const std::function<double(double)>& fidelity_curve,
                              double theta, double step, Parameter parameter,
                              FdDiagnostics* diag = nullptr);

/// Classical-FI oracle for a pmf family: Σ_k (∂_θ P(k))² / P(k) with
/// Richardson-extrapolated central differences; bins below 1e−300 skipped.
/// All evaluations of the family must share one truncation support.
FisherValue fi_of_pmf_family(const std::function<PhotonNumberDistribution(double)>& family,
                             double theta, double step, Parameter parameter);

}  // namespace qgain
