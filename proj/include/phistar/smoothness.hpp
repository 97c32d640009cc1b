#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phistar/factorization.hpp"
#include "phistar/natural.hpp"

namespace phistar {

struct SmoothnessVerdict {
  Natural base;
  std::uint64_t exponent = 1;
  Natural bound;
  bool smooth = false;
  Factorization factors_found;  // every prime < bound, full multiplicity
  Natural residual;             // factors_found * residual == base^exponent - 1
};

/// Complete split of a^k - 1 into its part below B and the rest, through
/// Phi_d(a) for every d | k. B <= 2^31.
SmoothnessVerdict is_shifted_smooth(const Natural& a, std::uint64_t k, const Natural& B);

/// P(Phi_d(a)) < B, with a fast rejection when no prime q < B, q = 1 (mod d)
/// has multiplicative order exactly d (the primitive prime is then >= B).
/// Requires a < 2^32 for the fast path.
bool cyclotomic_is_smooth(std::uint64_t a, std::uint64_t d, std::uint64_t B);

/// Analytic pre-filter for P(2^k - 1) < B. From 3^(phi(k)/2) <= Phi_k(2), with
/// Phi_k(2) dividing k * prod(q) * W over primes q < B, q = 1 (mod k) (W the
/// product of the base-2 Wieferich primes, the only primes whose square can
/// divide a primitive part), one gets
///   k * phi(k) <= (2 / log 3) * (B log B + k log W + k log k).
/// k_max also respects k <= B - 2 (a primitive prime is = 1 mod k).
struct ExponentCutoff {
  Natural bound;
  std::uint64_t k_max = 1;
  std::vector<Natural> wieferich_primes;

  bool admits(std::uint64_t k) const;
};

/// B >= 100, base 2 only (the Wieferich list is specific to base 2).
ExponentCutoff exponent_cutoff(const Natural& B, const Natural& base = 2);

/// All k <= cutoff with P(2^k - 1) < B, k = 1 included. B >= 2.
/// `progress`, when set, is called with (k, k_max) now and then.
std::vector<std::uint64_t> smooth_exponents_base2(
    const Natural& B, const std::function<void(std::uint64_t, std::uint64_t)>& progress = {});

/// Whether p = 2 appears in table rows. The published rows list 2 only for odd k.
enum class TwoPolicy { OddExponentsOnly, Always, Never };

struct TableOptions {
  TwoPolicy two = TwoPolicy::OddExponentsOnly;
  /// Completed blocks of primes are recorded here and skipped on restart.
  std::optional<std::filesystem::path> checkpoint;
  std::size_t block_primes = 1024;
  std::function<void(std::uint64_t p)> on_hit;  // streamed as found
};

/// Primes p <= p_bound with P(p^k - 1) < B. k >= 2, B <= 2^31, p_bound < 2^32.
std::vector<Natural> smooth_prime_powers(const Natural& p_bound, const Natural& B, std::uint64_t k,
                                         const TableOptions& options = {});

/// All k >= 1 with p^k <= power_cap and P(p^k - 1) < B; k never exceeds B - 2
/// (except k <= 2, which Zsigmondy does not constrain), so a huge cap is fine.
std::vector<std::uint64_t> odd_exponent_support(const Natural& p, const Natural& B,
                                                const Natural& power_cap);

/// CSV `k,p` rows sorted by (k, p), header included.
std::string table_csv(const std::vector<std::pair<std::uint64_t, std::vector<Natural>>>& rows);

}  // namespace phistar
