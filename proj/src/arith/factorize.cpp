#include "phistar/factorize.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "phistar/cyclotomic.hpp"
#include "phistar/errors.hpp"
#include "phistar/factor_cache.hpp"
#include "phistar/primes.hpp"
#include "phistar/smooth_part.hpp"

namespace phistar {
namespace {

// Smallest primes, used for the cheap trial-division prefix of factorize_u64.
const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    auto sieve = sieve_covering(1u << 16);
    return std::vector<std::uint32_t>(sieve->primes().begin(), sieve->primes().end());
  }();
  return primes;
}

std::uint64_t rho_u64(std::uint64_t n, std::uint64_t c, std::uint64_t budget) {
  // Brent's cycle detection with batched gcds.
  auto f = [&](std::uint64_t x) { return (mulmod_u64(x, x, n) + c) % n; };
  std::uint64_t y = 2, x = 2, ys = 2, g = 1, q = 1;
  std::uint64_t r = 1, used = 0;
  constexpr std::uint64_t kBatch = 128;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t steps = std::min(kBatch, r - k);
      for (std::uint64_t i = 0; i < steps; ++i) {
        y = f(y);
        q = mulmod_u64(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += steps;
      used += steps;
      if (used > budget) return 0;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g == n ? 0 : g;
}

void split_u64(std::uint64_t n, const Effort& effort, std::map<std::uint64_t, unsigned>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out[n] += 1;
    return;
  }
  for (std::uint64_t c = 1; c <= 16; ++c) {
    std::uint64_t d = rho_u64(n, c, effort.rho_iterations);
    if (d != 0) {
      split_u64(d, effort, out);
      split_u64(n / d, effort, out);
      return;
    }
  }
  throw EffortExceeded(from_u64(n));
}

Natural pm1_stage1(const Natural& n, std::uint64_t bound) {
  if (bound < 2) return 1;
  auto sieve = sieve_covering(bound + 1);
  Natural a = 2;
  for (std::uint32_t q : sieve->primes()) {
    if (q > bound) break;
    std::uint64_t qk = q;
    while (qk <= bound / q) qk *= q;
    mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), qk, n.get_mpz_t());
  }
  Natural g;
  Natural am1 = a - 1;
  mpz_gcd(g.get_mpz_t(), am1.get_mpz_t(), n.get_mpz_t());
  return g;
}

Natural rho_mpz(const Natural& n, unsigned long c, std::uint64_t budget) {
  Natural x = 2, y = 2, ys = 2, q = 1, g = 1, diff;
  std::uint64_t r = 1, used = 0;
  auto f = [&](Natural& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  constexpr std::uint64_t kBatch = 128;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t steps = std::min(kBatch, r - k);
      for (std::uint64_t i = 0; i < steps; ++i) {
        f(y);
        diff = x - y;
        mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
        q *= diff;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += steps;
      used += steps;
      if (used > budget) return 0;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      f(ys);
      diff = x - ys;
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g == n ? Natural(0) : g;
}

struct Splitter {
  const Effort& effort;
  std::vector<PrimeFactor> found;
  std::optional<Natural> unfactored;

  void add_prime(const Natural& p, unsigned e) { found.push_back({p, e}); }

  void give_up(const Natural& n) {
    if (unfactored) {
      *unfactored *= n;
    } else {
      unfactored = n;
    }
  }

  void split(const Natural& n, unsigned multiplicity) {
    if (n == 1) return;
    if (fits_u64(n)) {
      try {
        std::map<std::uint64_t, unsigned> parts;
        split_u64(to_u64(n), effort, parts);
        for (const auto& [p, e] : parts) add_prime(from_u64(p), e * multiplicity);
      } catch (const EffortExceeded& ex) {
        give_up(ex.cofactor());
      }
      return;
    }
    if (is_prime(n)) {
      add_prime(n, multiplicity);
      return;
    }
    if (mpz_perfect_power_p(n.get_mpz_t())) {
      for (unsigned long k = mpz_sizeinbase(n.get_mpz_t(), 2); k >= 2; --k) {
        Natural root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) {
          split(root, multiplicity * static_cast<unsigned>(k));
          return;
        }
      }
    }
    Natural d = pm1_stage1(n, effort.pm1_bound);
    if (d == 1 || d == n) {
      d = 0;
      for (unsigned long c = 1; c <= 3 && d == 0; ++c) d = rho_mpz(n, c, effort.rho_iterations);
    }
    if (d == 0 || d == 1 || d == n) {
      give_up(n);
      return;
    }
    Natural other;
    mpz_divexact(other.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    // Both pieces may share primes; recursion plus the final merge handles it.
    split(d, multiplicity);
    split(other, multiplicity);
  }
};

constexpr unsigned kCacheMinBits = 33;  // cache only n >= 2^32

bool cacheable(const Natural& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) >= kCacheMinBits; }

}  // namespace

SmallFactorization factorize_u64(std::uint64_t n, const Effort& effort) {
  if (n == 0) throw DomainError("factorize(0)");
  SmallFactorization out;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    if (n % p == 0) {
      unsigned e = 0;
      do {
        n /= p;
        ++e;
      } while (n % p == 0);
      out.emplace_back(p, e);
    }
  }
  if (n > 1) {
    std::map<std::uint64_t, unsigned> rest;
    split_u64(n, effort, rest);
    for (const auto& [p, e] : rest) out.emplace_back(p, e);
  }
  std::sort(out.begin(), out.end());
  // Merge duplicates (possible when rho splits a square).
  SmallFactorization merged;
  for (const auto& [p, e] : out) {
    if (!merged.empty() && merged.back().first == p) {
      merged.back().second += e;
    } else {
      merged.emplace_back(p, e);
    }
  }
  return merged;
}

PartialFactorization try_factorize(const Natural& n, const Effort& effort, FactorCache* cache) {
  if (sgn(n) <= 0) throw DomainError("factorize needs n >= 1");
  if (n == 1) return {};
  if (fits_u64(n) && !cacheable(n)) {
    try {
      return {Factorization::from_u64_pairs(factorize_u64(to_u64(n), effort)), std::nullopt};
    } catch (const EffortExceeded& ex) {
      return {Factorization{}, ex.cofactor()};
    }
  }
  if (cache && cacheable(n)) {
    if (auto hit = cache->lookup(n)) return {*hit, std::nullopt};
  }
  const std::uint64_t trial = std::min<std::uint64_t>(effort.trial_limit, 1u << 30);
  SmoothSplit head = trial >= 2 ? smooth_part(n, trial) : SmoothSplit{Factorization{}, n};
  Splitter splitter{effort, {}, std::nullopt};
  for (const auto& f : head.smooth) splitter.add_prime(f.prime, f.exponent);
  splitter.split(head.cofactor, 1);
  PartialFactorization result{Factorization(std::move(splitter.found)), splitter.unfactored};
  if (cache && !result.unfactored && cacheable(n)) cache->insert(n, result.found);
  return result;
}

Factorization factorize(const Natural& n, const Effort& effort, FactorCache* cache) {
  PartialFactorization r = try_factorize(n, effort, cache);
  if (r.unfactored) throw EffortExceeded(*r.unfactored);
  return r.found;
}

Factorization factorize_power_minus_one(const Natural& base, std::uint64_t k, const Effort& effort,
                                        FactorCache* cache) {
  if (cmp(base, 2) < 0 || k == 0) throw DomainError("factorize_power_minus_one needs base >= 2, k >= 1");
  const Natural n = pow_natural(base, k) - 1;
  if (n == 1) return {};
  if (cache && cacheable(n)) {
    if (auto hit = cache->lookup(n)) return *hit;
  }
  Factorization total;
  std::optional<Natural> unfactored;
  for (std::uint64_t d : divisors_u64(k)) {
    const Natural phi = cyclotomic_value(d, base);
    if (phi == 1) continue;
    // Progression-restricted trial division reaches much further than plain
    // trial division for the same work, since only primes = 1 (mod d) count.
    const std::uint64_t limit =
        std::min<std::uint64_t>(std::max<std::uint64_t>(effort.trial_limit, 2) * std::max<std::uint64_t>(d, 1),
                                std::uint64_t{1} << 26);
    SmoothSplit split = cyclotomic_smooth_part(base, d, phi, limit);
    total *= split.smooth;
    if (split.cofactor != 1) {
      Effort rest = effort;
      rest.trial_limit = 0;
      PartialFactorization tail = try_factorize(split.cofactor, rest, nullptr);
      total *= tail.found;
      if (tail.unfactored) {
        if (unfactored) {
          *unfactored *= *tail.unfactored;
        } else {
          unfactored = tail.unfactored;
        }
      }
    }
  }
  if (unfactored) throw EffortExceeded(*unfactored);
  if (cache && cacheable(n)) cache->insert(n, total);
  return total;
}

Natural largest_prime_factor(const Natural& n, const Effort& effort, FactorCache* cache) {
  if (cmp(n, 1) <= 0) throw DomainError("largest_prime_factor needs n >= 2");
  return factorize(n, effort, cache).largest_prime();
}

}  // namespace phistar

namespace phistar {

Factorization parse_product(std::string_view text, const Effort& effort, FactorCache* cache) {
  if (text.find_first_of("*^") == std::string_view::npos) {
    Natural n = parse_natural(text);
    if (sgn(n) == 0) throw DomainError("0 has no factorization");
    return factorize(n, effort, cache);
  }
  Factorization shape = Factorization::parse(text);
  std::vector<PrimeFactor> parts;
  for (const auto& pf : shape.factors()) {
    if (is_prime(pf.prime)) {
      parts.push_back(pf);
      continue;
    }
    for (const auto& q : factorize(pf.prime, effort, cache).factors())
      parts.push_back({q.prime, q.exponent * pf.exponent});
  }
  return Factorization(std::move(parts));
}

}  // namespace phistar
