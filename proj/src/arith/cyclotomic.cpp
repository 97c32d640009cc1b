#include "phistar/cyclotomic.hpp"

#include <algorithm>

#include "phistar/errors.hpp"
#include "phistar/primes.hpp"

namespace phistar {

std::vector<std::uint64_t> distinct_prime_factors_u64(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  for (const auto& [p, e] : factorize_u64(n)) out.push_back(p);
  return out;
}

std::vector<std::uint64_t> divisors_u64(std::uint64_t n) {
  if (n == 0) throw DomainError("divisors of zero");
  std::vector<std::uint64_t> divs{1};
  for (const auto& [p, e] : factorize_u64(n)) {
    const std::size_t base = divs.size();
    std::uint64_t pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::uint64_t euler_phi_u64(std::uint64_t n) {
  if (n == 0) throw DomainError("phi(0)");
  std::uint64_t r = n;
  for (std::uint64_t p : distinct_prime_factors_u64(n)) r = r / p * (p - 1);
  return r;
}

int mobius_u64(std::uint64_t n) {
  if (n == 0) throw DomainError("mu(0)");
  int mu = 1;
  for (const auto& [p, e] : factorize_u64(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

Natural cyclotomic_value(std::uint64_t k, const Natural& a) {
  if (k == 0) throw DomainError("cyclotomic index must be >= 1");
  if (cmp(a, 2) < 0) throw DomainError("cyclotomic argument must be >= 2");
  Natural num = 1;
  Natural den = 1;
  for (std::uint64_t d : divisors_u64(k)) {
    const int mu = mobius_u64(k / d);
    if (mu == 0) continue;
    Natural term = pow_natural(a, d) - 1;
    (mu > 0 ? num : den) *= term;
  }
  Natural q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

std::uint64_t multiplicative_order(const Natural& a, const Natural& p) {
  if (!is_prime(p)) throw DomainError("multiplicative_order needs a prime modulus");
  Natural ar = a % p;
  if (sgn(ar) == 0) throw DomainError("multiplicative_order: modulus divides the base");
  if (!fits_u64(p)) throw DomainError("multiplicative_order: modulus exceeds 64 bits");
  const std::uint64_t q = to_u64(p);
  const std::uint64_t base = to_u64(ar);
  std::uint64_t order = q - 1;
  for (const auto& [r, e] : factorize_u64(q - 1)) {
    for (unsigned i = 0; i < e && order % r == 0; ++i) {
      if (powmod_u64(base, order / r, q) != 1) break;
      order /= r;
    }
  }
  return order;
}

}  // namespace phistar
