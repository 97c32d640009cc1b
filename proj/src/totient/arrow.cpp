#include "phistar/arrow.hpp"

#include <set>

#include "phistar/errors.hpp"
#include "phistar/factor_cache.hpp"
#include "phistar/primes.hpp"

namespace phistar {
namespace {

bool squarefree(const Natural& m) {
  if (m == 1) return true;
  return factorize(m).is_squarefree();
}

// phi(m) for squarefree m.
Natural phi_squarefree(const Natural& m) {
  Natural r = 1;
  for (const auto& pf : factorize(m).factors()) r *= pf.prime - 1;
  return r;
}

bool divides(const Natural& d, const Natural& n) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()); }

}  // namespace

std::string ArrowChain::to_string() const {
  std::string s = start.to_string();
  for (const auto& m : steps) s += " -> " + to_decimal(m);
  s += " -> " + target.to_string();
  return s;
}

std::string check_chain(const ArrowChain& chain) {
  if (!is_prime(chain.start.p) || chain.start.e == 0) return "start is not a prime power";
  if (!is_prime(chain.target.p)) return "target is not a prime power";
  Natural prev = chain.start.value() - 1;
  std::string prev_name = chain.start.to_string();
  for (const auto& m : chain.steps) {
    if (sgn(m) <= 0 || !squarefree(m)) return to_decimal(m) + " is not squarefree";
    if (!divides(m, prev)) return to_decimal(m) + " does not divide the totient of " + prev_name;
    prev = phi_squarefree(m);
    prev_name = to_decimal(m);
  }
  if (!divides(chain.target.value(), prev))
    return chain.target.to_string() + " does not divide the totient of " + prev_name;
  return {};
}

bool verify_chain(const ArrowChain& chain) { return check_chain(chain).empty(); }

std::optional<unsigned> ArrowClosure::exponent_of(const Natural& p) const {
  for (const auto& pp : forced)
    if (pp.p == p) return pp.e;
  return std::nullopt;
}

ArrowClosure arrow_closure(const PrimePower& seed, const ArrowOptions& options) {
  if (!is_prime(seed.p) || seed.e == 0) throw DomainError("arrow seed must be a prime power");
  ArrowClosure out;
  std::map<Natural, unsigned> demand;
  std::set<Natural> known;  // forced primes other than the seed prime
  auto add = [&](const Factorization& f) {
    for (const auto& pf : f.factors()) {
      unsigned& d = demand[pf.prime];
      d = std::min(options.multiplicity_cap, d + pf.exponent);
    }
  };

  std::vector<Natural> frontier;
  const Factorization seed_part = factorize_power_minus_one(seed.p, seed.e, options.effort, options.cache);
  add(seed_part);
  for (const auto& pf : seed_part.factors()) {
    if (pf.prime == seed.p) continue;
    if (known.insert(pf.prime).second) {
      frontier.push_back(pf.prime);
      out.level[to_decimal(pf.prime)] = 1;
    }
  }
  for (unsigned level = 2; level <= options.depth && !frontier.empty(); ++level) {
    std::vector<Natural> next;
    for (const Natural& r : frontier) {
      if (r == 2) continue;
      const Factorization f = factorize(r - 1, options.effort, options.cache);
      add(f);
      for (const auto& pf : f.factors()) {
        if (pf.prime == seed.p) continue;
        if (known.insert(pf.prime).second) {
          next.push_back(pf.prime);
          out.level[to_decimal(pf.prime)] = level;
        }
      }
    }
    frontier = std::move(next);
  }
  // Every forced prime is itself present with exponent >= 1, even if no factor
  // demands it twice.
  for (const Natural& r : known) {
    unsigned& d = demand[r];
    d = std::max(d, 1u);
  }
  if (auto it = demand.find(seed.p); it != demand.end() && it->second > seed.e) {
    out.contradiction = ArrowContradiction{seed.p, it->second, seed.e};
  }
  for (const auto& [p, d] : demand) {
    if (d == 0 || p == seed.p) continue;
    out.forced.push_back({p, d});
    if (!out.contradiction) {
      if (auto u = options.unitary.find(p); u != options.unitary.end() && d > u->second)
        out.contradiction = ArrowContradiction{p, d, u->second};
    }
  }
  return out;
}

}  // namespace phistar
