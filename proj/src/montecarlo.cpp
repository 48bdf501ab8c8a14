#include "qgain/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "qgain/errors.hpp"
#include "qgain/estimators.hpp"
#include "qgain/numerics.hpp"

namespace qgain {

long long sample_added_photons(long long n, const Gain& g, PhiloxStream& rng) {
  if (n < 0) throw domain_error("sample_added_photons: n must be >= 0");
  if (g.g() == 1.0) return 0;
  double rate = sample_gamma(static_cast<double>(n + 1), rng) * (g.g() - 1.0);
  return sample_poisson(rate, rng);
}

std::vector<long long> sample_counts_number_probe(const std::vector<long long>& n_vec,
                                                  const Gain& g, const DetectorSpec& det,
                                                  PhiloxStream& rng) {
  if (n_vec.empty()) throw domain_error("sample_counts_number_probe: empty mode vector");
  std::vector<long long> counts(n_vec.size());
  for (std::size_t m = 0; m < n_vec.size(); ++m) {
    long long total = n_vec[m] + sample_added_photons(n_vec[m], g, rng);
    counts[m] = det.eta_d == 1.0 ? total : sample_binomial(total, det.eta_d, rng);
  }
  return counts;
}

std::vector<long long> sample_counts_coherent_probe(const std::vector<double>& energies,
                                                    const Gain& g, const DetectorSpec& det,
                                                    PhiloxStream& rng) {
  if (energies.empty()) throw domain_error("sample_counts_coherent_probe: empty mode vector");
  std::vector<long long> counts(energies.size());
  NormalSource normal;
  for (std::size_t m = 0; m < energies.size(); ++m) {
    DisplacedThermalParams dt = displaced_thermal_params(energies[m], g, det);
    if (dt.thermal_occupation == 0.0) {
      counts[m] = sample_poisson(dt.mean_amplitude * dt.mean_amplitude, rng);
      continue;
    }
    double sigma = std::sqrt(0.5 * dt.thermal_occupation);
    double re = dt.mean_amplitude + sigma * normal(rng);
    double im = sigma * normal(rng);
    counts[m] = sample_poisson(re * re + im * im, rng);
  }
  return counts;
}

namespace {

double run_one_trial(const TrialPlan& plan, double N, int M, std::uint64_t t) {
  PhiloxStream rng(plan.seed, t);
  long long y = 0;
  if (const auto* num = std::get_if<NumberState>(&plan.probe)) {
    for (long long c : sample_counts_number_probe(num->n, plan.g_true, plan.det, rng))
      y += c;
  } else {
    const auto& coh = std::get<CoherentState>(plan.probe);
    for (long long c : sample_counts_coherent_probe(coh.energies, plan.g_true, plan.det, rng))
      y += c;
  }
  return g_hat(static_cast<double>(y), N, M, plan.det);
}

}  // namespace

EstimatorStats run_estimator_trials(const TrialPlan& plan, int workers) {
  if (plan.trials < 1) throw domain_error("run_estimator_trials: trials must be >= 1");
  if (workers < 1) throw domain_error("run_estimator_trials: workers must be >= 1");
  if (std::holds_alternative<NdsTotalDistribution>(plan.probe))
    throw domain_error("run_estimator_trials: NDS-distribution probes are analytic-only, "
                       "not simulable per trial");
  ProbeTotals totals = probe_totals(plan.probe);

  std::vector<double> estimates(static_cast<std::size_t>(plan.trials));
  auto worker = [&](long long begin, long long end) {
    for (long long t = begin; t < end; ++t)
      estimates[static_cast<std::size_t>(t)] =
          run_one_trial(plan, totals.photons, totals.modes, static_cast<std::uint64_t>(t));
  };
  if (workers == 1 || plan.trials < 2 * workers) {
    worker(0, plan.trials);
  } else {
    std::vector<std::thread> pool;
    long long chunk = (plan.trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      long long begin = w * chunk;
      long long end = std::min<long long>(begin + chunk, plan.trials);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  // per-trial streams make the estimates independent of the schedule;
  // this reduction is sequential, so the stats are bit-stable too
  const double g_true = plan.g_true.g();
  const double t_count = static_cast<double>(plan.trials);
  double mean = 0.0, mse = 0.0;
  for (double e : estimates) {
    mean += e;
    mse += (e - g_true) * (e - g_true);
  }
  mean /= t_count;
  mse /= t_count;

  EstimatorStats stats;
  stats.trials = plan.trials;
  stats.mean_estimate = mean;
  stats.bias = mean - g_true;
  stats.empirical_mse = mse;
  if (plan.trials >= 2) {
    double var_est = 0.0, var_sq = 0.0;
    for (double e : estimates) {
      var_est += (e - mean) * (e - mean);
      double s = (e - g_true) * (e - g_true);
      var_sq += (s - mse) * (s - mse);
    }
    var_est /= (t_count - 1.0);
    var_sq /= (t_count - 1.0);
    stats.stderr_mean = std::sqrt(var_est / t_count);
    stats.stderr_mse = std::sqrt(var_sq / t_count);
    stats.stderr_valid = true;
  } else {
    stats.stderr_mean = std::numeric_limits<double>::quiet_NaN();
    stats.stderr_mse = std::numeric_limits<double>::quiet_NaN();
    stats.stderr_valid = false;
  }
  return stats;
}

double chi_square_test_pvalue(const CountHistogram& hist,
                              const PhotonNumberDistribution& expected) {
  if (hist.draws < 1) throw domain_error("chi_square_test_pvalue: empty histogram");
  const double draws = static_cast<double>(hist.draws);
  std::size_t bins = std::max(hist.counts.size(), expected.pmf.size());

  // expected counts, with all pmf mass beyond the support in the last bin
  std::vector<double> exp_counts(bins, 0.0);
  double covered = 0.0;
  for (std::size_t k = 0; k < expected.pmf.size(); ++k) {
    exp_counts[k] = expected.pmf[k] * draws;
    covered += expected.pmf[k];
  }
  exp_counts[bins - 1] += std::max(0.0, 1.0 - covered) * draws;
  std::vector<double> obs_counts(bins, 0.0);
  for (std::size_t k = 0; k < hist.counts.size(); ++k)
    obs_counts[k] = static_cast<double>(hist.counts[k]);

  // pool consecutive bins until each group expects >= 5 counts
  std::vector<double> group_exp, group_obs;
  double e_acc = 0.0, o_acc = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    e_acc += exp_counts[k];
    o_acc += obs_counts[k];
    if (e_acc >= 5.0) {
      group_exp.push_back(e_acc);
      group_obs.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (group_exp.empty())
      throw numeric_error("chi_square_test_pvalue: too few draws for any usable bin");
    group_exp.back() += e_acc;
    group_obs.back() += o_acc;
  }
  if (group_exp.size() < 2)
    throw numeric_error("chi_square_test_pvalue: fewer than 2 usable bins");
  double chi2 = 0.0;
  for (std::size_t i = 0; i < group_exp.size(); ++i) {
    double d = group_obs[i] - group_exp[i];
    chi2 += d * d / group_exp[i];
  }
  return chi_square_pvalue(chi2, static_cast<int>(group_exp.size()) - 1);
}

}  // namespace qgain
