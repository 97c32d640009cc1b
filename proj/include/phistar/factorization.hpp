#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phistar/natural.hpp"

namespace phistar {

struct PrimeFactor {
  Natural prime;
  unsigned exponent = 1;

  friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

/// Canonical factorization: primes strictly increasing, exponents >= 1.
/// The empty list represents 1.
class Factorization {
 public:
  Factorization() = default;
  /// Sorts and merges; throws DomainError on a zero exponent or a prime < 2.
  /// Primality of entries is not re-checked here (see validate()).
  explicit Factorization(std::vector<PrimeFactor> factors);
  Factorization(std::initializer_list<std::pair<std::uint64_t, unsigned>> factors);

  static Factorization from_u64_pairs(const std::vector<std::pair<std::uint64_t, unsigned>>& pairs);

  const std::vector<PrimeFactor>& factors() const& noexcept { return factors_; }
  // By value on rvalues, so range-for over factorize(n).factors() is safe.
  std::vector<PrimeFactor> factors() && noexcept { return std::move(factors_); }
  bool empty() const noexcept { return factors_.empty(); }
  std::size_t omega() const noexcept { return factors_.size(); }
  auto begin() const noexcept { return factors_.begin(); }
  auto end() const noexcept { return factors_.end(); }

  Natural value() const;
  unsigned exponent_of(const Natural& p) const;
  Natural largest_prime() const;  // precondition: !empty()
  bool is_squarefree() const;
  /// Part coprime to 2.
  Factorization odd_part() const;

  /// Multiplicative merge (exponents add).
  Factorization operator*(const Factorization& other) const;
  Factorization& operator*=(const Factorization& other);

  /// Throws DomainError unless every prime passes is_prime.
  void validate() const;

  /// "2^32*3*5*17*257*65537"; "1" for the empty factorization.
  std::string to_string() const;
  /// Always writes ^e, e.g. "2^5*3^1"; empty string for 1.
  std::string to_explicit_string() const;
  /// Accepts "p^e*q*..." (bare primes mean exponent 1) or "1".
  static Factorization parse(std::string_view text);

  std::vector<std::pair<std::uint64_t, unsigned>> to_u64_pairs() const;  // all primes must fit

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  void canonicalize();
  std::vector<PrimeFactor> factors_;
};

}  // namespace phistar
