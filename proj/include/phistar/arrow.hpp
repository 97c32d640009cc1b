#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phistar/factorize.hpp"
#include "phistar/totient.hpp"

namespace phistar {

class FactorCache;

/// q^g -> m_1 -> ... -> m_k -> p^f: m_1 | q^g - 1, m_{i+1} | phi(m_i), p^f | phi(m_k)
/// (p^f | q^g - 1 when there are no steps). Every m_i is squarefree.
struct ArrowChain {
  PrimePower start;
  std::vector<Natural> steps;
  PrimePower target;

  std::string to_string() const;
};

/// Empty string when the chain is valid, otherwise the first failing link.
std::string check_chain(const ArrowChain& chain);
bool verify_chain(const ArrowChain& chain);

struct ArrowOptions {
  unsigned depth = 4;
  Effort effort{};
  /// Exact exponents assumed for some primes (e.g. 3 -> 1 for "3 || N").
  std::map<Natural, unsigned> unitary;
  /// Ledger entries are clamped here.
  unsigned multiplicity_cap = 64;
  FactorCache* cache = nullptr;
};

struct ArrowContradiction {
  Natural prime;
  unsigned demanded = 0;
  unsigned allowed = 0;
};

struct ArrowClosure {
  /// prime -> exponent forced to divide N.
  std::vector<PrimePower> forced;
  std::optional<ArrowContradiction> contradiction;
  /// The arrow level at which each prime first appears (1 = divides q^g - 1).
  std::map<std::string, unsigned> level;

  std::optional<unsigned> exponent_of(const Natural& p) const;
};

/// Every prime power forced to divide N whenever seed || N and phi*(N) | N.
/// Level 1 adds the primes of q^g - 1; each later level adds the primes of r - 1
/// for primes r added at the previous level. Multiplicities come from
/// (q^g - 1) * prod_{forced r != q} (r - 1), which divides phi*(N).
/// Throws EffortExceeded when an intermediate factorization fails.
ArrowClosure arrow_closure(const PrimePower& seed, const ArrowOptions& options = {});

}  // namespace phistar
