#pragma once

#include <cstdint>
#include <vector>

#include "phistar/factorize.hpp"
#include "phistar/natural.hpp"

namespace phistar {

/// Phi_k(a) evaluated exactly. Requires k >= 1 and a >= 2.
Natural cyclotomic_value(std::uint64_t k, const Natural& a);

/// Least d >= 1 with a^d = 1 (mod p). DomainError when p | a or p is not prime.
std::uint64_t multiplicative_order(const Natural& a, const Natural& p);

std::vector<std::uint64_t> divisors_u64(std::uint64_t n);
std::uint64_t euler_phi_u64(std::uint64_t n);
int mobius_u64(std::uint64_t n);
std::vector<std::uint64_t> distinct_prime_factors_u64(std::uint64_t n);

}  // namespace phistar
