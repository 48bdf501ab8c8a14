#pragma once

#include <cmath>
#include <cstdint>

#include "qgain/errors.hpp"

namespace qgain {

/// Philox4x64-10 counter-based generator.
///
/// Streams are keyed by (seed, stream index); any (key, block counter)
/// pair maps to 4 output words with no sequential state, so per-trial
/// streams are reproducible under any parallel schedule. Output layout
/// (block order, counter-increment-before-generate, word order, and the
/// uniform-double mapping) matches the reference Philox implementation
/// bit for bit; see the regression vectors in the tests.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{seed, stream}, ctr_{0, 0, 0, 0}, pos_(4) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  /// Uniform on [0, 1): (u64 >> 11) / 2^53.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]: never returns 0, safe under log().
  double next_double_oc() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  void refill() {
    if (++ctr_[0] == 0)
      if (++ctr_[1] == 0)
        if (++ctr_[2] == 0) ++ctr_[3];
    std::uint64_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
    std::uint64_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 += 0x9E3779B97F4A7C15ull;  // golden-ratio Weyl increments
        k1 += 0xBB67AE8584CAA73Bull;
      }
      unsigned __int128 p0 = static_cast<unsigned __int128>(0xD2E7470EE14C6C93ull) * c0;
      unsigned __int128 p1 = static_cast<unsigned __int128>(0xCA5A826395121157ull) * c2;
      std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
      std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
      std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
      std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
      std::uint64_t n0 = hi1 ^ c1 ^ k0;
      std::uint64_t n1 = lo1;
      std::uint64_t n2 = hi0 ^ c3 ^ k1;
      std::uint64_t n3 = lo0;
      c0 = n0, c1 = n1, c2 = n2, c3 = n3;
    }
    buf_[0] = c0, buf_[1] = c1, buf_[2] = c2, buf_[3] = c3;
    pos_ = 0;
  }

  std::uint64_t key_[2];
  std::uint64_t ctr_[4];
  std::uint64_t buf_[4];
  int pos_;
};

/// Standard normal via Box–Muller (pairs cached on the stream wrapper).
class NormalSource {
 public:
  double operator()(PhiloxStream& rng) {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = rng.next_double_oc();
    double u2 = rng.next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(angle);
    have_ = true;
    return r * std::cos(angle);
  }

 private:
  double cached_ = 0.0;
  bool have_ = false;
};

/// Gamma(shape, scale=1) via Marsaglia–Tsang squeeze; shape > 0.
double sample_gamma(double shape, PhiloxStream& rng);

/// Poisson(mean): multiplicative inversion below mean 10, transformed
/// rejection (PTRS) above.
long long sample_poisson(double mean, PhiloxStream& rng);

/// Binomial(n, p) by Bernoulli summation; n is small in every caller.
long long sample_binomial(long long n, double p, PhiloxStream& rng);

}  // namespace qgain
