#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace entrywise {

// Identifies one random stream: a key plus a 64-bit stream number that
// occupies the upper half of the generator's 128-bit counter. Distinct
// (key, stream) pairs never share a counter value.
struct Seed {
  std::uint64_t key = 0;
  std::uint64_t stream = 0;

  Seed() = default;
  Seed(std::uint64_t k) : key(k) {}  // NOLINT: plain integers are seeds
  Seed(std::uint64_t k, std::uint64_t s) : key(k), stream(s) {}
};

// Stream for trial `trial` of grid cell `cell`; `purpose` separates the
// independent draws a single trial needs (signal, noise, ...).
// Requires cell < 2^32, trial < 2^24, purpose < 2^8.
Seed trial_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial, std::uint32_t purpose = 0);

// Philox4x32-10 counter-based generator.
class Rng {
 public:
  explicit Rng(Seed seed);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  bool bernoulli(double p);
  // Number of failures before the next success of a Bernoulli(p) sequence,
  // given log1p(-p). Saturates at UINT64_MAX when p == 0.
  std::uint64_t geometric(double log1m_p);

 private:
  void refill();

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

// Inverse standard normal CDF by rational approximation (relative error
// below 1.2e-9), using only arithmetic, log and sqrt.
double normal_quantile(double u);

}  // namespace entrywise
