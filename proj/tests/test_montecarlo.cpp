#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "qgain/amplifier.hpp"
#include "qgain/errors.hpp"
#include "qgain/estimators.hpp"
#include "qgain/montecarlo.hpp"
#include "qgain/numerics.hpp"
#include "qgain/params.hpp"
#include "qgain/rng.hpp"

using namespace qgain;

TEST_CASE("photon-addition sampler matches its mean") {
  PhiloxStream rng(31, 0);
  Gain g = Gain::from_gain(2.0);
  const int kDraws = 200000;
  for (long long n : {0LL, 2LL}) {
    double sum = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      long long a = sample_added_photons(n, g, rng);
      REQUIRE(a >= 0);
      sum += static_cast<double>(a);
    }
    double mean = sum / kDraws;
    double expect = (n + 1) * (g.g() - 1.0);
    // var = (n + 1)(G - 1) G
    double se = std::sqrt((n + 1) * (g.g() - 1.0) * g.g() / kDraws);
    CHECK(std::abs(mean - expect) < 5 * se);
  }
  for (int i = 0; i < 100; ++i)
    CHECK(sample_added_photons(3, Gain::from_gain(1.0), rng) == 0);
}

TEST_CASE("added-photon counts follow the negative binomial law") {
  PhiloxStream rng(32, 0);
  Gain g = Gain::from_gain(2.0);
  const long long kDraws = 200000;
  CountHistogram hist;
  for (long long i = 0; i < kDraws; ++i) hist.add(sample_added_photons(1, g, rng));
  PhotonNumberDistribution model;
  for (int a = 0; a < 80; ++a) model.pmf.push_back(fock_transition_prob(1, a, g));
  CHECK(chi_square_test_pvalue(hist, model) > 1e-3);
}

TEST_CASE("lossy counts of a number probe follow the mixture distribution") {
  PhiloxStream rng(33, 0);
  Gain g = Gain::from_gain(2.0);
  DetectorSpec det{0.7};
  const long long kDraws = 200000;
  CountHistogram hist;
  std::vector<long long> probe{1};
  for (long long i = 0; i < kDraws; ++i) {
    std::vector<long long> counts = sample_counts_number_probe(probe, g, det, rng);
    REQUIRE(counts.size() == 1);
    hist.add(counts[0]);
  }
  CHECK(chi_square_test_pvalue(hist, lossy_count_distribution(1, g, det)) > 1e-3);
}

TEST_CASE("coherent-probe counts match displaced-thermal moments") {
  PhiloxStream rng(34, 0);
  Gain g = Gain::from_gain(2.0);
  DetectorSpec det{0.8};
  const long long kDraws = 200000;
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> probe{1.5};
  for (long long i = 0; i < kDraws; ++i) {
    std::vector<long long> counts = sample_counts_coherent_probe(probe, g, det, rng);
    REQUIRE(counts.size() == 1);
    double k = static_cast<double>(counts[0]);
    sum += k;
    sum2 += k * k;
  }
  Moments m = count_moments(CoherentMode{1.5}, g, det);
  double mean = sum / kDraws;
  double second = sum2 / kDraws;
  double var = m.second_moment - m.mean * m.mean;
  CHECK(std::abs(mean - m.mean) < 5 * std::sqrt(var / kDraws));
  // standard error of the second moment via the fourth; bound it loosely
  CHECK(std::abs(second - m.second_moment) < 0.05 * m.second_moment);

  // unit gain, ideal detection: plain Poisson counts
  PhiloxStream prng(35, 0);
  CountHistogram hist;
  for (long long i = 0; i < kDraws; ++i) {
    std::vector<long long> counts = sample_counts_coherent_probe(
        {4.0}, Gain::from_gain(1.0), DetectorSpec{1.0}, prng);
    hist.add(counts[0]);
  }
  PhotonNumberDistribution poisson;
  double w = std::exp(-4.0);
  for (int k = 0; k < 40; ++k) {
    poisson.pmf.push_back(w);
    w *= 4.0 / (k + 1);
  }
  CHECK(chi_square_test_pvalue(hist, poisson) > 1e-3);
}

TEST_CASE("trial runner reproduces itself and ignores worker count") {
  TrialPlan plan{NumberState{{1, 1, 0}}, Gain::from_gain(2.0), DetectorSpec{0.7},
                 20000, 99};
  EstimatorStats a = run_estimator_trials(plan, 1);
  EstimatorStats b = run_estimator_trials(plan, 1);
  CHECK(a.mean_estimate == b.mean_estimate);
  CHECK(a.empirical_mse == b.empirical_mse);
  CHECK(a.stderr_mse == b.stderr_mse);

  EstimatorStats c = run_estimator_trials(plan, 3);
  CHECK(a.mean_estimate == c.mean_estimate);
  CHECK(a.bias == c.bias);
  CHECK(a.empirical_mse == c.empirical_mse);
  CHECK(a.stderr_mean == c.stderr_mean);
  CHECK(a.stderr_mse == c.stderr_mse);

  EstimatorStats d = run_estimator_trials(
      TrialPlan{NumberState{{1, 1, 0}}, Gain::from_gain(2.0), DetectorSpec{0.7}, 20000,
                100},
      1);
  CHECK(d.empirical_mse != a.empirical_mse);  // the seed matters
}

TEST_CASE("trial statistics agree with analytic expectations") {
  Gain g = Gain::from_gain(2.0);
  DetectorSpec det{0.9};
  TrialPlan number{NumberState{{2, 2, 2, 2, 2}}, g, det, 50000, 7};
  EstimatorStats sn = run_estimator_trials(number, 2);
  CHECK(sn.trials == 50000);
  CHECK(sn.stderr_valid);
  CHECK(std::abs(sn.bias) < 4 * sn.stderr_mean);
  double analytic_n = mse_number_analytic(10, 5, g, det).total;
  CHECK(std::abs(sn.empirical_mse - analytic_n) < 3 * sn.stderr_mse);

  TrialPlan coherent{CoherentState{{2.0, 2.0, 2.0, 2.0, 2.0}}, g, det, 50000, 8};
  EstimatorStats sc = run_estimator_trials(coherent, 2);
  CHECK(std::abs(sc.bias) < 4 * sc.stderr_mean);
  double analytic_c = mse_coherent_analytic(10, 5, g, det).total;
  CHECK(std::abs(sc.empirical_mse - analytic_c) < 3 * sc.stderr_mse);
}

TEST_CASE("degenerate trial counts are flagged") {
  TrialPlan plan{NumberState{{1}}, Gain::from_gain(2.0), DetectorSpec{1.0}, 1, 5};
  EstimatorStats s = run_estimator_trials(plan, 1);
  CHECK(s.trials == 1);
  CHECK_FALSE(s.stderr_valid);
  CHECK(std::isnan(s.stderr_mean));
  CHECK(std::isnan(s.stderr_mse));

  TrialPlan bad{NumberState{{1}}, Gain::from_gain(2.0), DetectorSpec{1.0}, 0, 5};
  CHECK_THROWS_AS((void)run_estimator_trials(bad, 1), domain_error);
}

TEST_CASE("sampling a bare total distribution is rejected") {
  TrialPlan plan{NdsTotalDistribution{{0.5, 0.5}, 2}, Gain::from_gain(2.0),
                 DetectorSpec{1.0}, 1000, 1};
  CHECK_THROWS_AS((void)run_estimator_trials(plan, 1), domain_error);
}

TEST_CASE("chi-square helper pools sparse cells") {
  CountHistogram hist;
  PhiloxStream rng(55, 0);
  const long long kDraws = 50000;
  for (long long i = 0; i < kDraws; ++i) hist.add(sample_poisson(2.0, rng));
  PhotonNumberDistribution model;
  double w = std::exp(-2.0);
  for (int k = 0; k < 30; ++k) {
    model.pmf.push_back(w);
    w *= 2.0 / (k + 1);
  }
  double p = chi_square_test_pvalue(hist, model);
  CHECK(p > 1e-3);
  CHECK(p <= 1.0);

  // grossly wrong model must be rejected
  PhotonNumberDistribution wrong;
  w = std::exp(-4.0);
  for (int k = 0; k < 30; ++k) {
    wrong.pmf.push_back(w);
    w *= 4.0 / (k + 1);
  }
  CHECK(chi_square_test_pvalue(hist, wrong) < 1e-6);
  CHECK_THROWS_AS((void)chi_square_test_pvalue(CountHistogram{}, model), domain_error);
}
