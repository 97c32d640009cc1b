#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "phistar/factorization.hpp"
#include "phistar/natural.hpp"

namespace phistar {

/// Restricts trial division to primes q = 1 (mod modulus).
struct ResidueFilter {
  std::uint64_t modulus = 1;
};

struct SmoothSplit {
  Factorization smooth;
  Natural cofactor;
};

/// Divides n by every tried prime q < bound to full multiplicity. Tried primes
/// are all primes below `bound`, or only those = 1 (mod filter->modulus) when a
/// filter is given, plus every prime in `extra_primes` that is below `bound`.
/// smooth * cofactor == n; cofactor has no tried prime factor. bound <= 2^31.
SmoothSplit smooth_part(const Natural& n, std::uint64_t bound,
                        std::optional<ResidueFilter> filter = std::nullopt,
                        std::span<const std::uint64_t> extra_primes = {});

/// Splits Phi_d(a) into its part over primes < bound and the cofactor. Every
/// prime divisor of Phi_d(a) either divides d or is = 1 (mod d), so only those
/// are tried, and the scan stops as soon as the remaining cofactor is 1 or
/// provably prime. `phi_value` must equal cyclotomic_value(d, a).
SmoothSplit cyclotomic_smooth_part(const Natural& a, std::uint64_t d, const Natural& phi_value,
                                   std::uint64_t bound);

/// Primes q < bound, q = 1 (mod d), q not dividing d, with ord_q(a) = d, i.e.
/// the primitive prime divisors of a^d - 1 below bound. Ascending.
std::vector<std::uint32_t> primitive_primes_below(std::uint32_t a, std::uint64_t d, std::uint64_t bound);

}  // namespace phistar
