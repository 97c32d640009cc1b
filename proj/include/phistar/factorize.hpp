#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "phistar/factorization.hpp"
#include "phistar/natural.hpp"

namespace phistar {

class FactorCache;

/// Budget for factorize(). Trial division runs to trial_limit; Pollard p-1
/// stage 1 uses smoothness bound pm1_bound; Brent's rho gets rho_iterations
/// per cofactor with seeds 1, 2, 3 (deterministic).
struct Effort {
  std::uint64_t trial_limit = 1u << 16;
  std::uint64_t pm1_bound = 100000;
  std::uint64_t rho_iterations = 1u << 22;

  friend bool operator==(const Effort&, const Effort&) = default;
};

struct PartialFactorization {
  Factorization found;
  std::optional<Natural> unfactored;  // composite residue that resisted the budget
};

/// Complete factorization or EffortExceeded(cofactor). Consults and updates
/// `cache` when given.
Factorization factorize(const Natural& n, const Effort& effort = {}, FactorCache* cache = nullptr);
PartialFactorization try_factorize(const Natural& n, const Effort& effort = {},
                                   FactorCache* cache = nullptr);

/// Factorization of base^k - 1 through the split base^k - 1 = prod_{d|k} Phi_d(base);
/// each cyclotomic value is trial-divided only by primes dividing d or = 1 (mod d).
Factorization factorize_power_minus_one(const Natural& base, std::uint64_t k,
                                        const Effort& effort = {}, FactorCache* cache = nullptr);

using SmallFactorization = std::vector<std::pair<std::uint64_t, unsigned>>;

/// Exact for every 64-bit n >= 1; throws EffortExceeded only when rho fails
/// within effort.rho_iterations (not observed in practice for 64-bit inputs).
SmallFactorization factorize_u64(std::uint64_t n, const Effort& effort = {});

/// Reads a decimal integer or a product such as "2^10*3*77" whose bases need
/// not be prime, and returns the complete factorization of its value.
Factorization parse_product(std::string_view text, const Effort& effort = {},
                            FactorCache* cache = nullptr);

/// P(n), the largest prime factor. DomainError for n <= 1.
Natural largest_prime_factor(const Natural& n, const Effort& effort = {},
                             FactorCache* cache = nullptr);

}  // namespace phistar
