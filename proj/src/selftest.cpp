#include "qgain/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "qgain/amplifier.hpp"
#include "qgain/errors.hpp"
#include "qgain/estimators.hpp"
#include "qgain/fisher.hpp"
#include "qgain/params.hpp"

namespace qgain {

namespace {

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-30);
}

/// Fidelity between two single-mode displaced thermal states with real
/// amplitudes a1, a2 and occupations n1, n2. Used as the independent
/// fidelity route to the lossy coherent-probe QFI.
double displaced_thermal_fidelity(double a1, double n1, double a2, double n2) {
  double d = a1 - a2;
  double num = std::exp(-d * d / (2.0 * (n1 + n2 + 1.0)));
  double den = std::sqrt((n1 + 1.0) * (n2 + 1.0)) - std::sqrt(n1 * n2);
  return num / den;
}

SelftestCheck check_lemma(long long& cases_out) {
  long long cases = 0, failures = 0;
  std::vector<long long> n_vec;
  // every mode vector with components <= 3 and 1..4 modes, a = 0..5
  std::function<void(std::size_t)> enumerate = [&](std::size_t depth) {
    if (depth == n_vec.size()) {
      for (long long a = 0; a <= 5; ++a) {
        auto [lhs, rhs] = lemma_identity_check(n_vec, a);
        ++cases;
        if (lhs != rhs) ++failures;
      }
      return;
    }
    for (long long v = 0; v <= 3; ++v) {
      n_vec[depth] = v;
      enumerate(depth + 1);
    }
  };
  for (std::size_t modes = 1; modes <= 4; ++modes) {
    n_vec.assign(modes, 0);
    enumerate(0);
  }
  cases_out = cases;
  std::ostringstream detail;
  detail << cases << " (n_vec, a) pairs enumerated, " << failures << " mismatches";
  return {"lemma1-exhaustive", failures == 0, detail.str()};
}

SelftestCheck check_oracle_grid(double perturbation) {
  const double grid_g[] = {1.1, 1.5, 2.0, 3.0, 5.0};
  const double grid_n[] = {0.0, 1.0, 6.0};
  const int grid_m[] = {1, 9};
  const double h = 1e-4;
  double worst = 0.0;
  std::string worst_at = "none";
  auto track = [&](double err, const std::string& where) {
    if (err > worst) {
      worst = err;
      worst_at = where;
    }
  };

  for (double G : grid_g) {
    Gain g = Gain::from_gain(G);
    for (double N : grid_n) {
      for (int M : grid_m) {
        // optimal QFI via the NDS fidelity of a Fock probe, oracle in tau
        auto nds_curve = [&](double tau_p) {
          GainPair pair(g, Gain::from_tau(tau_p));
          std::vector<double> pmf(static_cast<std::size_t>(N) + 1, 0.0);
          pmf.back() = 1.0;
          return fidelity_nds(pmf, M, pair);
        };
        double k_tau = qfi_from_fidelity(nds_curve, g.tau(), h, Parameter::wrt_tau).value;
        double closed_tau = fi_schmidt_counting(N, M).value + perturbation;
        track(rel_err(k_tau, closed_tau), "qfi_nds(tau)");
        double k_g = convert({k_tau, Parameter::wrt_tau}, Parameter::wrt_G, g).value;
        track(rel_err(k_g, qfi_nds(N, M, g).value + perturbation), "qfi_nds(G)");

        // coherent QFI via the Gaussian fidelity. The curvature of these
        // curves collapses like 1/G^2 at large gain, so differentiate in
        // rapidity (where it stays O(N+M)) and convert.
        auto coh_curve = [&](double tau_p) {
          return fidelity_coherent(N, M, GainPair(g, Gain::from_tau(tau_p)));
        };
        double k_coh =
            convert(qfi_from_fidelity(coh_curve, g.tau(), h, Parameter::wrt_tau),
                    Parameter::wrt_G, g)
                .value;
        track(rel_err(k_coh, qfi_coherent(N, M, g).value), "qfi_coherent");

        // lossy coherent QFI via the displaced-thermal fidelity, eta = 0.7
        DetectorSpec det{0.7};
        auto lossy_curve = [&](double tau_p) {
          Gain gp = Gain::from_tau(tau_p);
          DisplacedThermalParams t1 = displaced_thermal_params(N / M, g, det);
          DisplacedThermalParams t2 = displaced_thermal_params(N / M, gp, det);
          double f1 = displaced_thermal_fidelity(t1.mean_amplitude, t1.thermal_occupation,
                                                 t2.mean_amplitude, t2.thermal_occupation);
          return std::pow(f1, static_cast<double>(M));
        };
        double k_lossy =
            convert(qfi_from_fidelity(lossy_curve, g.tau(), h, Parameter::wrt_tau),
                    Parameter::wrt_G, g)
                .value;
        track(rel_err(k_lossy, qfi_coherent_lossy(N, M, g, det).value), "qfi_coherent_lossy");
      }
    }
  }

  // lossy number-probe QFI against the pmf-family Fisher information
  for (long long n : {0ll, 1ll}) {
    for (double G : {1.5, 2.0}) {
      for (double eta : {0.7, 1.0}) {
        Gain g = Gain::from_gain(G);
        DetectorSpec det{eta};
        double series = qfi_number_lossy(n, g, det).wrt_tau.value;
        if (eta == 1.0) {
          track(rel_err(series, 4.0 * (n + 1)), "qfi_number_lossy(eta=1)");
        } else {
          std::size_t k_max = lossy_count_distribution(n, g, det).pmf.size() + 8;
          auto family = [&](double tau) {
            return lossy_count_distribution_fixed(n, Gain::from_tau(tau), det, 1e-12, k_max);
          };
          double oracle = fi_of_pmf_family(family, g.tau(), h, Parameter::wrt_tau).value;
          track(rel_err(series, oracle), "qfi_number_lossy(lossy)");
        }
      }
    }
  }

  std::ostringstream detail;
  detail << "worst relative error " << worst << " at " << worst_at << " (tolerance 1e-6)";
  return {"oracle-equivalence-grid", worst <= 1e-6, detail.str()};
}

SelftestCheck check_lossless_reductions() {
  double worst = 0.0;
  DetectorSpec unit{1.0};
  for (double G : {1.5, 2.0, 4.0}) {
    Gain g = Gain::from_gain(G);
    for (double N : {1.0, 6.0, 20.0}) {
      for (int M : {1, 9, 20}) {
        worst = std::max(worst, rel_err(qfi_coherent_lossy(N, M, g, unit).value,
                                        qfi_coherent(N, M, g).value));
        MseBreakdown mse = mse_coherent_analytic(N, M, g, unit);
        worst = std::max(worst, std::fabs(mse.inefficiency_term));
        worst = std::max(worst, rel_err(mse_number_analytic(N, M, g, unit).total,
                                        1.0 / qfi_nds(N, M, g).value));
      }
    }
    // unit-efficiency count pmf collapses onto the amplifier transition law
    for (long long n : {0ll, 2ll}) {
      PhotonNumberDistribution dist = lossy_count_distribution(n, g, unit);
      for (std::size_t k = 0; k < dist.pmf.size(); ++k) {
        long long a = static_cast<long long>(k) - n;
        double want = a < 0 ? 0.0 : fock_transition_prob(n, a, g);
        worst = std::max(worst, std::fabs(dist.pmf[k] - want));
      }
    }
  }
  std::ostringstream detail;
  detail << "worst deviation " << worst << " (tolerance 1e-12)";
  return {"lossless-reductions", worst <= 1e-12, detail.str()};
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& options) {
  SelftestReport report;
  report.checks.push_back(check_lemma(report.lemma_cases));
  report.checks.push_back(check_oracle_grid(options.qfi_nds_perturbation));
  report.checks.push_back(check_lossless_reductions());
  return report;
}

}  // namespace qgain
