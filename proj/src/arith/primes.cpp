#include "phistar/primes.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <mutex>

#include "phistar/errors.hpp"

namespace phistar {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

namespace {

constexpr std::array<std::uint64_t, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool strong_probable_prime(std::uint64_t n, std::uint64_t a, std::uint64_t d, unsigned s) {
  std::uint64_t x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : kWitnesses) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;
  std::uint64_t d = n - 1;
  unsigned s = std::countr_zero(d);
  d >>= s;
  for (std::uint64_t a : kWitnesses) {
    if (!strong_probable_prime(n, a, d, s)) return false;
  }
  return true;
}

bool is_prime(const Natural& n) {
  if (sgn(n) <= 0) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

PrimeSieve::PrimeSieve(std::uint64_t limit) : limit_(std::max<std::uint64_t>(limit, 3)) {
  const std::uint64_t odd_count = (limit_ + 1) / 2;  // odd numbers below limit_ (1 included)
  odd_composite_.assign((odd_count + 63) / 64, 0);
  auto set = [&](std::uint64_t i) { odd_composite_[i >> 6] |= std::uint64_t{1} << (i & 63); };
  auto test = [&](std::uint64_t i) { return (odd_composite_[i >> 6] >> (i & 63)) & 1; };
  set(0);  // 1 is not prime
  for (std::uint64_t p = 3; p * p < limit_; p += 2) {
    if (test(p / 2)) continue;
    for (std::uint64_t m = p * p; m < limit_; m += 2 * p) set(m / 2);
  }
  if (limit_ > 2) primes_.push_back(2);
  for (std::uint64_t i = 1; 2 * i + 1 < limit_; ++i) {
    if (!test(i)) primes_.push_back(static_cast<std::uint32_t>(2 * i + 1));
  }
}

bool PrimeSieve::is_prime(std::uint64_t n) const {
  if (n >= limit_) throw DomainError("PrimeSieve query beyond limit");
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  const std::uint64_t i = n / 2;
  return !((odd_composite_[i >> 6] >> (i & 63)) & 1);
}

std::vector<std::uint32_t> PrimeSieve::progression(std::uint64_t m, std::uint64_t bound) const {
  bound = std::min(bound, limit_);
  std::vector<std::uint32_t> out;
  if (m <= 2) {
    for (std::uint32_t p : primes_) {
      if (p >= bound) break;
      if (m == 2 && p == 2) continue;
      out.push_back(p);
    }
    return out;
  }
  // q = 1 (mod m) with q odd means q = 1 (mod lcm(m, 2)).
  const std::uint64_t step = (m % 2 == 0) ? m : 2 * m;
  for (std::uint64_t q = step + 1; q < bound; q += step) {
    if (is_prime(q)) out.push_back(static_cast<std::uint32_t>(q));
  }
  return out;
}

std::shared_ptr<const PrimeSieve> sieve_covering(std::uint64_t limit) {
  static std::mutex mu;
  static std::shared_ptr<const PrimeSieve> current;
  std::lock_guard lock(mu);
  if (!current || current->limit() < limit) {
    std::uint64_t target = std::max<std::uint64_t>(limit, 1u << 16);
    if (current) target = std::max(target, std::min<std::uint64_t>(current->limit() * 2, limit * 2));
    current = std::make_shared<const PrimeSieve>(target);
  }
  return current;
}

std::uint64_t next_prime_u64(std::uint64_t n) {
  if (n < 2) return 2;
  std::uint64_t c = (n % 2 == 0) ? n + 1 : n + 2;
  while (!is_prime_u64(c)) c += 2;
  return c;
}

}  // namespace phistar
