#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phistar/factorize.hpp"
#include "phistar/natural.hpp"
#include "phistar/totient.hpp"

namespace phistar {

class FactorCache;

struct SearchConfig {
  Natural prime_bound = 100;           // every prime of N is below this (<= 2^31)
  Natural odd_power_cap = 10000;       // every odd prime power p^a <= this
  /// Exponents e of 2 to try. Empty means smooth_exponents_base2(prime_bound).
  std::vector<unsigned> two_exponent_set;
  std::optional<unsigned> omega_cap;   // omega(N) <= omega_cap
  std::optional<std::vector<Natural>> h_targets;
  Effort effort{};
  unsigned parallel_width = 1;
  /// Restrict N to 2^e * (every odd prime up to its largest, no gaps).
  bool initial_segment_support = false;
  FactorCache* cache = nullptr;

  void validate() const;  // throws DomainError
};

struct ForcedPowerExceedsCap {
  Natural prime;
  unsigned needed_exponent = 0;
};
struct ForcedExceedsUnitary {
  Natural prime;
  unsigned demanded = 0;  // exponent demanded by prod (P - 1)
  unsigned allowed = 0;   // exponent available (0 for a prime ruled out of N)
};
struct NoCandidatePrime {};
struct HOutOfRange {};
struct Undecidable {
  Natural cofactor;
};

using Contradiction =
    std::variant<ForcedPowerExceedsCap, ForcedExceedsUnitary, NoCandidatePrime, HOutOfRange, Undecidable>;

std::string contradiction_kind(const Contradiction& c);
std::string to_string(const Contradiction& c);  // e.g. "ForcedPowerExceedsCap(3, 22)"

/// Partial assignment inside one 2^e branch.
struct SearchState {
  unsigned two_exponent = 0;
  /// odd prime -> exponent; 0 = required (known to divide N), exponent undecided.
  std::map<std::uint64_t, unsigned> assigned;
  /// prime -> exponent demanded by (2^e - 1) * prod over decided p^a of (p^a - 1)
  /// * prod over required r of (r - 1).
  std::map<std::uint64_t, unsigned> forced_multiplicity;
  /// Every odd prime below this has been decided (present in `assigned` or absent).
  std::uint64_t frontier = 3;
  std::vector<std::string> trail;

  /// 2^e * prod over decided p^a.
  Factorization decided_part() const;
};

/// A state in which every prime of m is decided and nothing else is known yet.
SearchState state_from(const Factorization& m);

struct PruneVerdict {
  bool keep = true;
  std::optional<Contradiction> reason;
};

/// Closes the state (adds required primes and their demands), then applies the
/// demand, cap, omega and h-window tests. Never rejects a state that extends to
/// a solution admitted by the config.
PruneVerdict prune(SearchState& state, const SearchConfig& config);

struct EliminationCertificate {
  unsigned two_exponent = 0;
  Contradiction contradiction;
  /// Depth 0 means the 2^e root itself fails.
  unsigned depth = 0;
  std::vector<std::string> trail;
  std::map<std::string, std::uint64_t> histogram;  // contradiction kind -> leaves
  std::uint64_t nodes = 0;
};

enum class BranchOutcome { Solution, Eliminated, Undecidable };
std::string_view outcome_name(BranchOutcome o);

struct BranchResult {
  unsigned two_exponent = 0;
  BranchOutcome outcome = BranchOutcome::Eliminated;
  std::vector<SolutionRecord> solutions;  // sorted by value
  /// First contradiction in DFS order, or the one that closed the branch.
  std::optional<EliminationCertificate> certificate;
  std::uint64_t nodes = 0;
  double seconds = 0;
};

struct SearchResult {
  std::vector<SolutionRecord> solutions;  // all branches, sorted by value
  std::vector<BranchResult> branches;     // sorted by e
};

/// One 2^e branch.
BranchResult close_and_check(unsigned e, const SearchConfig& config);

/// Every branch in the configured exponent set plus e = 0 (N = 1).
/// `on_branch` is called as branches finish (from worker threads, serialised).
SearchResult enumerate_solutions(const SearchConfig& config,
                                 const std::function<void(const BranchResult&)>& on_branch = {});

}  // namespace phistar
