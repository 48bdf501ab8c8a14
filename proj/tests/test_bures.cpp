#include <doctest.h>

#include <cmath>
#include <vector>

#include "qgain/bures.hpp"
#include "qgain/errors.hpp"
#include "qgain/fisher.hpp"
#include "qgain/params.hpp"
#include "qgain/rng.hpp"

using namespace qgain;

TEST_CASE("worst-case fidelity at integer energy") {
  GainPair pair(Gain::from_gain(1.0), Gain::from_gain(2.0));
  // nu = 1/sqrt(2); N = 1, M = 2: nu^(N + M) = 2^(-3/2)
  EcbResult r = min_fidelity_quantum(1.0, 2, pair);
  CHECK(r.min_fidelity == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
  // integer energy: all weight on the single occupation N
  CHECK(r.weight_lo == 1.0);
  CHECK(r.weight_hi == 0.0);
  CHECK(r.support_lo == 1);
  CHECK(r.support_hi == 1);
  CHECK(r.ecb_distance ==
        doctest::Approx(std::sqrt(1.0 - std::pow(2.0, -1.5))).epsilon(1e-14));

  EcbResult vac = min_fidelity_quantum(0.0, 3, pair);
  CHECK(vac.min_fidelity == doctest::Approx(std::pow(pair.nu, 3)).epsilon(1e-14));
  CHECK(vac.support_lo == 0);
  CHECK(vac.support_hi == 0);
}

TEST_CASE("worst-case fidelity at fractional energy interpolates") {
  GainPair pair(Gain::from_gain(2.0), Gain::from_gain(3.0));
  double nu = pair.nu;
  EcbResult r = min_fidelity_quantum(5.5, 3, pair);
  double expect = std::pow(nu, 3) * (0.5 * std::pow(nu, 5) + 0.5 * std::pow(nu, 6));
  CHECK(r.min_fidelity == doctest::Approx(expect).epsilon(1e-14));
  CHECK(r.support_lo == 5);
  CHECK(r.support_hi == 6);
  CHECK(r.weight_lo == doctest::Approx(0.5).epsilon(1e-12));

  // continuity across integers
  EcbResult below = min_fidelity_quantum(4.0 - 1e-13, 2, pair);
  EcbResult at = min_fidelity_quantum(4.0, 2, pair);
  EcbResult above = min_fidelity_quantum(4.0 + 1e-13, 2, pair);
  CHECK(std::abs(below.min_fidelity - at.min_fidelity) < 1e-12);
  CHECK(std::abs(above.min_fidelity - at.min_fidelity) < 1e-12);

  // more energy or more separation only hurts
  double prev = 1.0;
  for (double N : {0.0, 0.5, 1.0, 2.5, 7.0}) {
    double f = min_fidelity_quantum(N, 3, pair).min_fidelity;
    CHECK(f <= prev + 1e-15);
    prev = f;
  }
  double prev_d = 0.0;
  for (double gp : {2.0, 2.5, 3.0, 4.0, 6.0}) {
    GainPair p(Gain::from_gain(2.0), Gain::from_gain(gp));
    double d = min_fidelity_quantum(3.0, 2, p).ecb_distance;
    CHECK(d >= prev_d - 1e-15);
    prev_d = d;
  }
}

TEST_CASE("reference value for a fixed rapidity separation") {
  // gains with tau' - tau = arccosh(1 / 0.9)
  double dtau = std::acosh(1.0 / 0.9);
  Gain g = Gain::from_gain(2.0);
  Gain gp = Gain::from_tau(g.tau() + dtau);
  GainPair pair(g, gp);
  // for this separation nu = 0.9
  CHECK(pair.nu == doctest::Approx(0.9).epsilon(1e-12));
  EcbResult r = min_fidelity_quantum(1.0, 1, pair);
  CHECK(r.min_fidelity == doctest::Approx(0.81).epsilon(1e-12));
}

TEST_CASE("no probe energy: classical and quantum minima coincide") {
  for (double gp : {1.5, 2.0, 4.0}) {
    GainPair pair(Gain::from_gain(2.0), Gain::from_gain(gp));
    double q = min_fidelity_quantum(0.0, 2, pair).min_fidelity;
    double c = min_fidelity_classical(0.0, 2, pair);
    CHECK(c == doctest::Approx(q).epsilon(1e-13));
  }
}

TEST_CASE("coherent probes never distinguish better than number probes") {
  for (double g1 : {1.0, 1.5, 2.0, 4.0}) {
    for (double g2 : {1.0, 1.5, 2.0, 4.0}) {
      GainPair pair(Gain::from_gain(g1), Gain::from_gain(g2));
      for (double N : {0.0, 1.0, 5.5}) {
        for (int M : {1, 3}) {
          double q = min_fidelity_quantum(N, M, pair).min_fidelity;
          double c = min_fidelity_classical(N, M, pair);
          CHECK(c >= q - 1e-12);
          bool degenerate = (N == 0.0) || (g1 == g2);
          if (degenerate)
            CHECK(std::abs(c - q) < 1e-12);
          else
            CHECK(c > q + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("random photon statistics respect the worst-case bound") {
  PhiloxStream rng(2024, 0);
  GainPair pair(Gain::from_gain(1.5), Gain::from_gain(2.5));
  for (int trial = 0; trial < 500; ++trial) {
    double N = 0.25 + 7.5 * rng.next_double();
    std::vector<double> p = testing::random_pmf_with_mean(N, rng);
    int M = 1 + static_cast<int>(rng.next_double() * 4);
    CHECK(nds_fidelity_lower_bound_check(p, N, M, pair));
  }
}

TEST_CASE("bound check rejects inconsistent inputs") {
  GainPair pair(Gain::from_gain(1.5), Gain::from_gain(2.5));
  std::vector<double> p{0.5, 0.5};  // mean 0.5
  CHECK_THROWS_AS((void)nds_fidelity_lower_bound_check(p, 2.0, 1, pair), domain_error);
  CHECK_NOTHROW((void)nds_fidelity_lower_bound_check(p, 0.5, 1, pair));
}

TEST_CASE("random pmf generator hits the requested mean") {
  PhiloxStream rng(7, 7);
  for (double N : {0.3, 1.0, 2.7, 6.25}) {
    for (int i = 0; i < 20; ++i) {
      std::vector<double> p = testing::random_pmf_with_mean(N, rng);
      double total = 0.0, mean = 0.0;
      for (std::size_t n = 0; n < p.size(); ++n) {
        CHECK(p[n] >= 0.0);
        total += p[n];
        mean += static_cast<double>(n) * p[n];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(mean == doctest::Approx(N).epsilon(1e-9));
    }
  }
}
