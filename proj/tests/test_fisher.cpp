#include <doctest.h>

#include <cmath>
#include <vector>

#include "qgain/amplifier.hpp"
#include "qgain/errors.hpp"
#include "qgain/fisher.hpp"
#include "qgain/params.hpp"

using namespace qgain;

namespace {
const Gain kG2 = Gain::from_gain(2.0);
}

TEST_CASE("closed-form information at G = 2, N = 6, M = 9") {
  CHECK(qfi_nds(6, 9, kG2).value == doctest::Approx(7.5).epsilon(1e-15));
  CHECK(qfi_coherent(6, 9, kG2).value == doctest::Approx(5.5).epsilon(1e-15));
  CHECK(fi_homodyne(6, 9, kG2).value == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(fi_heterodyne(6, 9, kG2).value == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(qfi_nds(6, 9, kG2).parameter == Parameter::wrt_G);

  // strict ordering away from the modal point
  double nds = qfi_nds(6, 9, kG2).value;
  double coh = qfi_coherent(6, 9, kG2).value;
  CHECK(nds > coh);
  CHECK(coh > fi_homodyne(6, 9, kG2).value);
  CHECK(fi_homodyne(6, 9, kG2).value >= fi_heterodyne(6, 9, kG2).value);
}

TEST_CASE("vacuum probes make the probe state irrelevant") {
  for (double G : {1.3, 2.0, 5.0}) {
    Gain g = Gain::from_gain(G);
    CHECK(qfi_nds(0, 4, g).value == doctest::Approx(qfi_coherent(0, 4, g).value)
                                        .epsilon(1e-14));
  }
}

TEST_CASE("rapidity parameterization of the optimal bound") {
  FisherValue k_tau = fi_schmidt_counting(6, 9);
  CHECK(k_tau.value == doctest::Approx(60.0).epsilon(1e-15));
  CHECK(k_tau.parameter == Parameter::wrt_tau);
  FisherValue k_g = convert(k_tau, Parameter::wrt_G, kG2);
  CHECK(k_g.value == doctest::Approx(7.5).epsilon(1e-15));
  // K_G = K_tau / (4 G (G - 1)); round trip is exact to double precision
  FisherValue back = convert(k_g, Parameter::wrt_tau, kG2);
  CHECK(back.value == doctest::Approx(60.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)convert(k_tau, Parameter::wrt_G, Gain::from_gain(1.0)),
                  singularity_error);
}

TEST_CASE("information functions diverge at unit gain") {
  Gain unit = Gain::from_gain(1.0);
  CHECK_THROWS_AS((void)qfi_nds(2, 3, unit), singularity_error);
  CHECK_THROWS_AS((void)qfi_coherent(2, 3, unit), singularity_error);
  CHECK_THROWS_AS((void)qfi_coherent_lossy(2, 3, unit, DetectorSpec{0.5}),
                  singularity_error);
  // quadrature measurements stay finite
  CHECK(fi_homodyne(2, 3, unit).value == doctest::Approx(2.0 / 1.0 + 6.0).epsilon(1e-14));
  CHECK(fi_heterodyne(2, 3, unit).value == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("quadrature information at small occupation") {
  Gain g = Gain::from_gain(1.0);
  // N = 0, M = 1: homodyne 2/(2G-1)^2 -> 2, heterodyne (N/2+M)/G^2 -> 1
  CHECK(fi_homodyne(0, 1, g).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fi_heterodyne(0, 1, g).value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("lossy coherent information reduces to the ideal case") {
  for (double G : {1.5, 2.0, 4.0}) {
    Gain g = Gain::from_gain(G);
    CHECK(qfi_coherent_lossy(3, 5, g, DetectorSpec{1.0}).value ==
          doctest::Approx(qfi_coherent(3, 5, g).value).epsilon(1e-14));
    // strictly increasing in detector efficiency
    double prev = 0.0;
    for (double eta : {0.3, 0.6, 0.9}) {
      double v = qfi_coherent_lossy(3, 5, g, DetectorSpec{eta}).value;
      CHECK(v > prev);
      prev = v;
    }
    CHECK(prev < qfi_coherent(3, 5, g).value);
  }
}

TEST_CASE("number-probe information with lossy counting: reference values") {
  // 60-digit evaluations of the summed series
  NumberLossyQfi a = qfi_number_lossy(1, kG2, DetectorSpec{0.7});
  CHECK(a.wrt_tau.value == doctest::Approx(6.166871479041688441775).epsilon(1e-12));
  CHECK(a.wrt_g.value == doctest::Approx(0.7708589348802110552218).epsilon(1e-12));
  CHECK(a.wrt_tau.parameter == Parameter::wrt_tau);
  CHECK(a.wrt_g.parameter == Parameter::wrt_G);

  NumberLossyQfi b = qfi_number_lossy(0, kG2, DetectorSpec{0.9});
  CHECK(b.wrt_tau.value == doctest::Approx(72.0 / 19.0).epsilon(1e-12));
  CHECK(b.wrt_g.value == doctest::Approx(9.0 / 19.0).epsilon(1e-12));

  NumberLossyQfi c = qfi_number_lossy(2, Gain::from_gain(4.0), DetectorSpec{0.5});
  CHECK(c.wrt_tau.value == doctest::Approx(9.209012187286334091746).epsilon(1e-12));
  CHECK(c.wrt_g.value == doctest::Approx(0.191854420568465293578).epsilon(1e-12));
}

TEST_CASE("ideal counting of a number probe saturates the optimal bound") {
  for (long long n = 0; n <= 5; ++n) {
    for (double G : {1.2, 2.0, 4.0}) {
      NumberLossyQfi v = qfi_number_lossy(n, Gain::from_gain(G), DetectorSpec{1.0});
      CHECK(std::abs(v.wrt_tau.value - 4.0 * (n + 1)) <= 1e-8 * 4.0 * (n + 1));
    }
  }
  NumberLossyQfi two = qfi_number_lossy(1, kG2, DetectorSpec{1.0});
  CHECK(two.wrt_tau.value == doctest::Approx(8.0).epsilon(1e-10));
  CHECK(two.wrt_g.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("multimode number-probe information adds over modes") {
  DetectorSpec det{0.7};
  NumberLossyQfi sum = qfi_number_lossy({1, 1, 0}, kG2, det);
  NumberLossyQfi one = qfi_number_lossy(1, kG2, det);
  NumberLossyQfi zero = qfi_number_lossy(0, kG2, det);
  CHECK(sum.wrt_tau.value ==
        doctest::Approx(2 * one.wrt_tau.value + zero.wrt_tau.value).epsilon(1e-13));
  CHECK(sum.wrt_g.value ==
        doctest::Approx(2 * one.wrt_g.value + zero.wrt_g.value).epsilon(1e-13));
}

TEST_CASE("lossy counting information is bounded by the ideal-detector value") {
  for (double eta : {0.5, 0.7, 0.9}) {
    NumberLossyQfi v = qfi_number_lossy(2, kG2, DetectorSpec{eta});
    CHECK(v.wrt_tau.value > 0.0);
    CHECK(v.wrt_tau.value < 12.0);  // 4 (n + 1) at n = 2
  }
}

TEST_CASE("overlap fidelities") {
  GainPair pair(Gain::from_gain(1.0), kG2);
  // two-mode vacuum: nu^(0 + M) = nu^2 = 1/2
  std::vector<double> vacuum{1.0};
  CHECK(fidelity_nds(vacuum, 2, pair) == doctest::Approx(0.5).epsilon(1e-14));

  GainPair close(kG2, Gain::from_gain(2.1));
  std::vector<double> p{0.5, 0.3, 0.2};
  double nu = close.nu;
  double by_hand = 0.0;
  for (int n = 0; n < 3; ++n) by_hand += p[n] * std::pow(nu, n + 4);
  CHECK(fidelity_nds(p, 4, close) == doctest::Approx(by_hand).epsilon(1e-14));

  CHECK(fidelity_nds(vacuum, 2, GainPair(kG2, kG2)) == 1.0);
  CHECK_THROWS_AS((void)fidelity_nds({0.5, 0.4}, 2, pair), domain_error);
}

TEST_CASE("coherent-probe fidelity") {
  GainPair pair(kG2, Gain::from_gain(4.5));
  CHECK(fidelity_coherent(1.0, 1, pair) ==
        doctest::Approx(0.8462516100719151846514).epsilon(1e-13));
  // zero energy reduces to the vacuum overlap
  CHECK(fidelity_coherent(0.0, 3, pair) ==
        doctest::Approx(std::pow(pair.nu, 3)).epsilon(1e-14));
  CHECK(fidelity_coherent(2.0, 2, GainPair(kG2, kG2)) == 1.0);
  // more energy distinguishes better
  double prev = 1.0;
  for (double N : {0.0, 1.0, 4.0, 9.0}) {
    double f = fidelity_coherent(N, 2, pair);
    CHECK(f <= prev);
    prev = f;
  }
}

TEST_CASE("curvature extraction from a fidelity curve") {
  // F = exp(-c (x - x0)^2) has -4 d2F/dx2 at x0 equal to 8 c
  auto curve = [](double x) { return std::exp(-3.0 * (x - 1.5) * (x - 1.5)); };
  FdDiagnostics diag;
  FisherValue v = qfi_from_fidelity(curve, 1.5, 1e-4, Parameter::wrt_G, &diag);
  CHECK(v.value == doctest::Approx(24.0).epsilon(1e-6));
  CHECK(v.parameter == Parameter::wrt_G);
  CHECK_FALSE(diag.flagged);

  // flat curve: zero curvature, no spurious division
  CHECK(qfi_from_fidelity([](double) { return 1.0; }, 0.3, 1e-4, Parameter::wrt_tau)
            .value == 0.0);

  // a kink defeats the finite-difference stencil and must be reported
  auto kink = [](double x) { return 1.0 - std::abs(x - 2.0); };
  CHECK_THROWS_AS((void)qfi_from_fidelity(kink, 2.0, 1e-4, Parameter::wrt_G),
                  numeric_error);
}

TEST_CASE("curvature matches closed forms through the fidelity route") {
  double h = 1e-4;
  // coherent probe, ideal detection
  Gain g = Gain::from_gain(2.5);
  auto coherent_curve = [&](double gp) {
    return fidelity_coherent(4.0, 3, GainPair(g, Gain::from_gain(gp)));
  };
  CHECK(qfi_from_fidelity(coherent_curve, g.g(), h, Parameter::wrt_G).value ==
        doctest::Approx(qfi_coherent(4.0, 3, g).value).epsilon(1e-5));

  // number-state probe through the total-photon distribution
  std::vector<double> point_mass(7, 0.0);
  point_mass.back() = 1.0;
  auto nds_curve = [&](double tau) {
    return fidelity_nds(point_mass, 9, GainPair(g, Gain::from_tau(tau)));
  };
  CHECK(qfi_from_fidelity(nds_curve, g.tau(), h, Parameter::wrt_tau).value ==
        doctest::Approx(fi_schmidt_counting(6, 9).value).epsilon(1e-6));
}

TEST_CASE("classical information of a discrete family") {
  // binomial(n = 2, eta) family differentiated in eta at 0.5: FI = n / (eta (1 - eta)) = 8
  auto family = [](double eta) {
    PhotonNumberDistribution d;
    d.pmf = {(1 - eta) * (1 - eta), 2 * eta * (1 - eta), eta * eta};
    d.tail_bound = 0.0;
    return d;
  };
  CHECK(fi_of_pmf_family(family, 0.5, 1e-5, Parameter::wrt_G).value ==
        doctest::Approx(8.0).epsilon(1e-9));

  // ideal counting of a one-photon probe, differentiated in the rapidity
  Gain g = Gain::from_gain(2.0);
  DetectorSpec det{1.0};
  long long k_max =
      static_cast<long long>(lossy_count_distribution(1, g, det).pmf.size()) + 8;
  auto counting_family = [&](double tau) {
    return lossy_count_distribution_fixed(1, Gain::from_tau(tau), det, 1e-12, k_max);
  };
  CHECK(fi_of_pmf_family(counting_family, g.tau(), 1e-4, Parameter::wrt_tau).value ==
        doctest::Approx(8.0).epsilon(1e-5));

  auto broken = [](double theta) {
    PhotonNumberDistribution d;
    d.pmf.assign(theta < 0.5 ? 2 : 3, 0.5);
    return d;
  };
  CHECK_THROWS_AS((void)fi_of_pmf_family(broken, 0.5, 1e-3, Parameter::wrt_G),
                  domain_error);
}
