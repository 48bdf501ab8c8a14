#pragma once

#include <cstdint>
#include <vector>

#include "qgain/amplifier.hpp"
#include "qgain/params.hpp"
#include "qgain/rng.hpp"

namespace qgain {

struct TrialPlan {
  ProbeSpec probe;
  Gain g_true;
  DetectorSpec det;
  long long trials;
  std::uint64_t seed;
};

struct EstimatorStats {
  long long trials;
  double mean_estimate;
  double bias;           // mean_estimate − G_true
  double empirical_mse;  // mean of (ĝ − G_true)²
  double stderr_mean;    // NaN when trials < 2
  double stderr_mse;     // NaN when trials < 2
  bool stderr_valid;
};

/// Photons the amplifier adds to an n-photon input: NB(n+1, 1/G) drawn as
/// a gamma–Poisson mixture (rate ~ Gamma(n+1, scale G−1)).
long long sample_added_photons(long long n, const Gain& g, PhiloxStream& rng);

/// Per-mode counts for a number probe: amplify, then thin each mode's
/// n_m + a_m photons with a Binomial(·, η_d).
std::vector<long long> sample_counts_number_probe(const std::vector<long long>& n_vec,
                                                  const Gain& g, const DetectorSpec& det,
                                                  PhiloxStream& rng);

/// Per-mode counts for a coherent probe: draw the mode amplitude from the
/// Gaussian P-function of the displaced thermal output (variance
/// η_d(G−1)/2 per quadrature around √(η_d G N_m)), then Poisson-count it.
std::vector<long long> sample_counts_coherent_probe(const std::vector<double>& energies,
                                                    const Gain& g, const DetectorSpec& det,
                                                    PhiloxStream& rng);

/// Run the estimator over plan.trials independent trials. Trial t draws
/// from the stream keyed (seed, t), so the result is identical for any
/// worker count. NDS-distribution probes are not simulable here.
EstimatorStats run_estimator_trials(const TrialPlan& plan, int workers = 1);

/// Tally of simulated counts for distribution-level checks.
struct CountHistogram {
  std::vector<std::int64_t> counts;
  std::int64_t draws = 0;

  void add(long long k) {
    if (k >= static_cast<long long>(counts.size())) counts.resize(k + 1, 0);
    ++counts[static_cast<std::size_t>(k)];
    ++draws;
  }
};

/// Pearson χ² p-value of an empirical histogram against a truncated pmf.
/// Bins with expected count < 5 are pooled (from the top down); the
/// pmf's tail mass beyond its support joins the last bin.
double chi_square_test_pvalue(const CountHistogram& hist,
                              const PhotonNumberDistribution& expected);

}  // namespace qgain
