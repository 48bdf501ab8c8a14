#include "qgain/numerics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qgain/errors.hpp"

namespace qgain {

double lchoose(double n, double k) {
  if (k < 0.0 || n < k) throw domain_error("lchoose: need 0 <= k <= n");
  if (k == 0.0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::uint64_t choose_u64(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;  // invariant: c = C(n, i) entering iteration i
  for (unsigned i = 0; i < k; ++i) {
    std::uint64_t num = n - i;
    std::uint64_t den = i + 1;
    std::uint64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    // den | c because C(n, i+1) = c*num/den is integral and gcd(num, den) = 1
    c /= den;
    if (num != 0 && c > std::numeric_limits<std::uint64_t>::max() / num)
      throw numeric_error("choose_u64: overflow at C(" + std::to_string(n) + "," + std::to_string(k) + ")");
    c *= num;
  }
  return c;
}

namespace {

// lower regularized gamma P(s,x) by power series
double gamma_p_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) {
      return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
  }
  throw numeric_error("regularized_gamma_q: series did not converge");
}

// upper regularized gamma Q(s,x) by modified Lentz continued fraction
double gamma_q_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) {
      return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
  }
  throw numeric_error("regularized_gamma_q: continued fraction did not converge");
}

}  // namespace

double regularized_gamma_q(double s, double x) {
  if (!(s > 0.0) || !(x >= 0.0) || !std::isfinite(s) || !std::isfinite(x))
    throw domain_error("regularized_gamma_q: need s > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double chi_square_pvalue(double chi2, int dof) {
  if (dof < 1) throw domain_error("chi_square_pvalue: dof must be >= 1");
  if (!(chi2 >= 0.0)) throw domain_error("chi_square_pvalue: statistic must be >= 0");
  return regularized_gamma_q(0.5 * dof, 0.5 * chi2);
}

}  // namespace qgain
