#pragma once

#include <cstdint>

namespace qgain {

/// log of the binomial coefficient C(n, k) for real n ≥ k ≥ 0.
double lchoose(double n, double k);

/// Binomial coefficient as a checked 64-bit integer; throws numeric_error
/// once the exact value no longer fits.
std::uint64_t choose_u64(unsigned n, unsigned k);

/// Regularized upper incomplete gamma Q(s, x) = Γ(s, x)/Γ(s) for s > 0,
/// x ≥ 0. Series for x < s + 1, Lentz continued fraction otherwise.
double regularized_gamma_q(double s, double x);

/// Upper-tail p-value of a chi-square statistic with `dof` degrees of
/// freedom: Q(dof/2, chi2/2).
double chi_square_pvalue(double chi2, int dof);

}  // namespace qgain
