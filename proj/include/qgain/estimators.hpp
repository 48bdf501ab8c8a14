#pragma once

#include "qgain/params.hpp"

namespace qgain {

/// Analytic mean-squared error of the counting estimator, split into the
/// quantum bound, the probe-choice penalty, and the detector-loss excess.
struct MseBreakdown {
  double qcrb_term;          // G(G−1)/(N+M)
  double probe_penalty_term; // G²N/(N+M)² for coherent probes, 0 for number probes
  double inefficiency_term;  // (1−η_d)/(η_d(N+M)) · [G − M/(N+M)]
  double total;
};

/// Gain estimate from a total photocount Y: (Y/η_d + M)/(N + M).
/// Deliberately unclipped — values below 1 keep the estimator unbiased.
double g_hat(double total_count, double N, int M, const DetectorSpec& det);

MseBreakdown mse_number_analytic(double N, int M, const Gain& g, const DetectorSpec& det);
MseBreakdown mse_coherent_analytic(double N, int M, const Gain& g, const DetectorSpec& det);

/// The gain above which a single-photon-per-mode probe with photon
/// counting beats the best coherent-probe bound at efficiency η_d < 1.
/// Bracketed bisection to |ΔG| ≤ 1e−9; the result is independent of
/// M_probe (the equation's M dependence cancels).
double threshold_gain(const DetectorSpec& det, int M_probe);

}  // namespace qgain
