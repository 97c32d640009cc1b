#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "phistar/natural.hpp"

namespace phistar {

// Primality policy:
//   n < 2^64  : deterministic Miller-Rabin, bases 2..37 (the first twelve
//               primes), which is exact for every n < 3.3 * 10^24.
//   n >= 2^64 : GMP mpz_probab_prime_p(n, 30): Baillie-PSW followed by six
//               Miller-Rabin rounds with random bases. No BPSW pseudoprime is
//               known; results above 2^64 are "probable prime".
bool is_prime_u64(std::uint64_t n);
bool is_prime(const Natural& n);

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Odd-only sieve of Eratosthenes below `limit`.
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  bool is_prime(std::uint64_t n) const;  // precondition: n < limit()
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }

  /// Primes q < min(bound, limit()) with q = 1 (mod m), ascending.
  std::vector<std::uint32_t> progression(std::uint64_t m, std::uint64_t bound) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> odd_composite_;  // bit i <-> 2i+1
  std::vector<std::uint32_t> primes_;
};

/// Process-wide sieve covering at least [0, limit). Grows on demand; the
/// returned object is immutable and safe to share between threads.
std::shared_ptr<const PrimeSieve> sieve_covering(std::uint64_t limit);

/// Smallest prime > n (n < 2^63).
std::uint64_t next_prime_u64(std::uint64_t n);

}  // namespace phistar
