#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace phistar {

// Arbitrary-precision non-negative integer. Non-negativity is enforced at the
// parsing boundary; arithmetic inside the library never goes below zero.
using Natural = mpz_class;

// Exact reduced fraction; mpq_class keeps numerator/denominator canonical.
using ExactRational = mpq_class;

Natural parse_natural(std::string_view text);
std::string to_decimal(const Natural& n);

Natural from_u64(std::uint64_t v);
bool fits_u64(const Natural& n);
std::uint64_t to_u64(const Natural& n);  // throws DomainError unless fits_u64(n)
std::optional<std::uint64_t> as_u64(const Natural& n);

Natural pow_natural(const Natural& base, unsigned long exponent);
Natural pow_natural(std::uint64_t base, unsigned long exponent);

/// Exponent of the prime p in n (n > 0).
unsigned valuation(const Natural& n, const Natural& p);
unsigned valuation_u64(std::uint64_t n, std::uint64_t p);

ExactRational make_rational(const Natural& num, const Natural& den);
std::string to_string(const ExactRational& q);
bool is_integral(const ExactRational& q);

}  // namespace phistar
