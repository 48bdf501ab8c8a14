#include "qgain/estimators.hpp"

#include <cmath>
#include <string>

#include "qgain/errors.hpp"
#include "qgain/fisher.hpp"

namespace qgain {

double g_hat(double total_count, double N, int M, const DetectorSpec& det) {
  if (!(total_count >= 0.0)) throw domain_error("g_hat: count must be >= 0");
  if (!(N >= 0.0) || M < 1 || N + M <= 0.0)
    throw domain_error("g_hat: need N >= 0, M >= 1");
  return (total_count / det.eta_d + M) / (N + M);
}

namespace {

MseBreakdown mse_counting(double N, int M, const Gain& g, const DetectorSpec& det,
                          bool coherent_probe) {
  if (!(N >= 0.0) || M < 1) throw domain_error("mse: need N >= 0, M >= 1");
  const double G = g.g(), eta = det.eta_d, total_modes = N + M;
  MseBreakdown out;
  out.qcrb_term = G * (G - 1.0) / total_modes;
  out.probe_penalty_term = coherent_probe ? G * G * N / (total_modes * total_modes) : 0.0;
  out.inefficiency_term =
      (1.0 - eta) / (eta * total_modes) * (G - M / total_modes);
  out.total = out.qcrb_term + out.probe_penalty_term + out.inefficiency_term;
  return out;
}

}  // namespace

MseBreakdown mse_number_analytic(double N, int M, const Gain& g, const DetectorSpec& det) {
  return mse_counting(N, M, g, det, false);
}

MseBreakdown mse_coherent_analytic(double N, int M, const Gain& g, const DetectorSpec& det) {
  return mse_counting(N, M, g, det, true);
}

double threshold_gain(const DetectorSpec& det, int M_probe) {
  if (!(det.eta_d > 0.0) || !(det.eta_d < 1.0))
    throw domain_error("threshold_gain: eta_d must lie strictly inside (0, 1)");
  if (M_probe < 1) throw domain_error("threshold_gain: M_probe must be >= 1");

  const double N = static_cast<double>(M_probe);  // single photon per mode
  auto excess = [&](double G) {
    Gain g = Gain::from_gain(G);
    double mse = mse_number_analytic(N, M_probe, g, det).total;
    double qcrb = 1.0 / qfi_coherent_lossy(N, M_probe, g, det).value;
    return mse - qcrb;  // positive where the coherent bound still wins
  };

  double lo = 1.0 + 1e-12;
  double hi = 100.0;
  double f_lo = excess(lo);
  if (!(f_lo > 0.0))
    throw numeric_error("threshold_gain: no crossing; bound already beaten at G -> 1 "
                        "(f(1+) = " + std::to_string(f_lo) + ")");
  while (excess(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e4)
      throw numeric_error("threshold_gain: no sign change on (1, 1e4]; eta_d = " +
                          std::to_string(det.eta_d));
  }
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qgain
