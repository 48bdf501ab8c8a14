#pragma once

#include <stdexcept>
#include <string>

namespace qgain {

/// Invalid argument: out-of-domain parameter, malformed probe, bad pmf.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

/// Requested a quantity that diverges at the given parameter point
/// (e.g. any value with respect to G evaluated at G = 1).
class singularity_error : public domain_error {
 public:
  explicit singularity_error(const std::string& msg) : domain_error(msg) {}
};

/// Numerical procedure failed: series did not converge within the term
/// budget, finite-difference step dominated by roundoff, bracket without
/// sign change, and similar.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qgain
