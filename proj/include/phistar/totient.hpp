#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phistar/factorization.hpp"
#include "phistar/natural.hpp"

namespace phistar {

/// p^e with p prime and e >= 1.
struct PrimePower {
  Natural p;
  unsigned e = 1;

  Natural value() const;
  std::string to_string() const;  // "5^7", or "7" when e == 1
  /// Accepts "p" or "p^e"; validates primality.
  static PrimePower parse(std::string_view text);
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// prod (p^e - 1) over p^e || n; 1 for n = 1.
Natural phi_star(const Factorization& n);

/// n / phi*(n), reduced.
ExactRational h_ratio(const Factorization& n);

/// d | n and gcd(d, n/d) = 1.
bool is_unitary_divisor(const Natural& d, const Natural& n);

enum class SolutionSource { KnownList, SearchDiscovered, UserSupplied };
std::string_view source_name(SolutionSource s);

struct SolutionRecord {
  Factorization n;
  ExactRational h;
  SolutionSource source = SolutionSource::UserSupplied;

  Natural value() const { return n.value(); }
};

/// A record when phi*(n) | n.
std::optional<SolutionRecord> is_solution(const Factorization& n,
                                          SolutionSource source = SolutionSource::UserSupplied);

/// The twelve known solutions in their customary order N1..N12 (not sorted:
/// N9 > N10). Re-verified on first use; a bad
/// entry is a fatal logic_error.
const std::vector<SolutionRecord>& known_solutions();

/// 2-adic bookkeeping: f + sum over odd p | n of v2(p - 1) <= v2(n).
/// For odd n > 1 this is always false (only f = 0 and n = 1 pass).
bool two_adic_capacity_ok(const Factorization& n, unsigned h_target_two_exponent);

/// 2^(2^(r+1)) - 2^(2^r), r = number of odd prime factors.
Natural cooper_bound(unsigned r_odd_primes);

/// Bound on each odd prime power: 2^(2^(r-1)) with r counting odd primes (r >= 1).
Natural max_prime_power_bound(unsigned r_odd_primes);
/// 2^(2^r): the same bound when r is read as counting every prime of N.
Natural max_prime_power_bound_all_primes(unsigned r_odd_primes);

/// Primes p > P(m) with (p - 1) | m / gcd(m, phi*(m)) and
/// (p / (p - 1))^(r_total - k) >= h_target / h(m), where k is the number of odd
/// primes of m. Ascending. DomainError when r_total < k + 1.
std::vector<Natural> next_prime_candidates(const Factorization& m, const ExactRational& h_target,
                                           unsigned r_total);

/// Squarefree product of the first r primes.
struct PrimorialProbe {
  Factorization n;
  ExactRational h;
  bool divisible = false;
};
PrimorialProbe primorial_probe(unsigned r);

}  // namespace phistar
