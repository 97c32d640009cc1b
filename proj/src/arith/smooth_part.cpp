#include "phistar/smooth_part.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "phistar/cyclotomic.hpp"
#include "phistar/errors.hpp"
#include "phistar/kernels.hpp"
#include "phistar/primes.hpp"

namespace phistar {
namespace {

constexpr std::size_t kBlock = 1024;
constexpr std::size_t kCachedBlocksPerKey = 64;
constexpr std::size_t kMaxCachedKeys = 8192;

// Odd primes q < bound with q = 1 (mod m), served in prepared blocks. The first
// blocks of every (m, bound) pair are kept, since table generation reuses the
// same progressions for thousands of bases.
class ProgressionBlocks {
 public:
  ProgressionBlocks(std::uint64_t m, std::uint64_t bound)
      : bound_(bound), sieve_(sieve_covering(bound)) {
    step_ = (m <= 2) ? 2 : (m % 2 == 0 ? m : 2 * m);
    starts_.push_back((m <= 2) ? 3 : step_ + 1);
  }

  // Block i, or nullptr past the end. Blocks beyond the cached prefix are
  // rebuilt from their recorded start on every request.
  std::shared_ptr<const kernels::ModulusBatch> block(std::size_t i) {
    std::lock_guard lock(mu_);
    while (starts_.size() <= i) {
      const std::size_t j = starts_.size() - 1;
      auto b = build(starts_[j]);
      if (j == cached_.size() && j < kCachedBlocksPerKey) cached_.push_back(b.batch);
      starts_.push_back(b.end);
    }
    if (starts_[i] >= bound_) return nullptr;
    if (i < cached_.size()) return cached_[i];
    auto b = build(starts_[i]);
    if (i + 1 == starts_.size()) starts_.push_back(b.end);
    if (i == cached_.size() && i < kCachedBlocksPerKey) cached_.push_back(b.batch);
    return b.batch;
  }

 private:
  struct Built {
    std::shared_ptr<const kernels::ModulusBatch> batch;  // null when no prime remains
    std::uint64_t end;
  };

  Built build(std::uint64_t from) const {
    std::vector<std::uint32_t> qs;
    qs.reserve(kBlock);
    std::uint64_t x = from;
    while (qs.size() < kBlock && x < bound_) {
      if (sieve_->is_prime(x)) qs.push_back(static_cast<std::uint32_t>(x));
      x += step_;
    }
    if (qs.empty()) return {nullptr, std::max(x, bound_)};
    return {std::make_shared<const kernels::ModulusBatch>(std::move(qs)), x};
  }

  std::uint64_t bound_;
  std::shared_ptr<const PrimeSieve> sieve_;
  std::uint64_t step_;
  std::mutex mu_;
  std::vector<std::uint64_t> starts_;  // starts_[i]: first candidate of block i
  std::vector<std::shared_ptr<const kernels::ModulusBatch>> cached_;
};

std::shared_ptr<ProgressionBlocks> progression_for(std::uint64_t m, std::uint64_t bound) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<ProgressionBlocks>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(m, bound);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() >= kMaxCachedKeys) cache.clear();
  auto p = std::make_shared<ProgressionBlocks>(m, bound);
  cache.emplace(key, p);
  return p;
}

std::vector<std::uint32_t> limbs_of(const Natural& n) {
  std::size_t count = (mpz_sizeinbase(n.get_mpz_t(), 2) + 31) / 32;
  std::vector<std::uint32_t> limbs(std::max<std::size_t>(count, 1), 0);
  std::size_t written = 0;
  mpz_export(limbs.data(), &written, 1, sizeof(std::uint32_t), 0, 0, n.get_mpz_t());
  limbs.resize(std::max<std::size_t>(written, 1));
  return limbs;
}

unsigned divide_out(Natural& n, unsigned long q) {
  unsigned e = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), q);
    ++e;
  }
  return e;
}

void check_bound(std::uint64_t bound) {
  if (bound > (std::uint64_t{1} << 31)) throw DomainError("trial-division bound above 2^31");
}

// Squared comparison without overflow: q*q > n ?
bool square_exceeds(std::uint64_t q, const Natural& n) {
  Natural sq = from_u64(q);
  sq *= sq;
  return cmp(sq, n) > 0;
}

}  // namespace

SmoothSplit smooth_part(const Natural& n, std::uint64_t bound, std::optional<ResidueFilter> filter,
                        std::span<const std::uint64_t> extra_primes) {
  if (sgn(n) <= 0) throw DomainError("smooth_part needs n >= 1");
  check_bound(bound);
  std::vector<PrimeFactor> found;
  Natural rest = n;
  auto take = [&](std::uint64_t q) {
    if (q < 2 || q >= bound) return;
    if (unsigned e = divide_out(rest, q)) found.push_back({from_u64(q), e});
  };
  for (std::uint64_t q : extra_primes) take(q);
  const std::uint64_t m = filter ? std::max<std::uint64_t>(filter->modulus, 1) : 1;
  if (m == 1) take(2);

  if (bound > 3 && rest != 1) {
    auto blocks = progression_for(m, bound);
    std::vector<std::uint32_t> res(kBlock);
    for (std::size_t bi = 0; rest != 1; ++bi) {
      auto block = blocks->block(bi);
      if (!block) break;
      const std::uint64_t first = block->moduli().front();
      if (!filter && square_exceeds(first, rest)) {
        // Every prime below `first` is gone, so rest is 1 or a prime.
        if (cmp(rest, bound) < 0) {
          found.push_back({rest, 1});
          rest = 1;
        }
        break;
      }
      if (filter && cmp(rest, first) < 0) break;
      const auto limbs = limbs_of(rest);
      kernels::residue_batch(*block, limbs, res);
      for (std::size_t i = 0; i < block->size(); ++i) {
        if (res[i] == 0) take(block->moduli()[i]);
      }
    }
  }
  Factorization smooth(std::move(found));
  return {std::move(smooth), std::move(rest)};
}

SmoothSplit cyclotomic_smooth_part(const Natural& a, std::uint64_t d, const Natural& phi_value,
                                   std::uint64_t bound) {
  if (d == 0) throw DomainError("cyclotomic index must be >= 1");
  check_bound(bound);
  std::vector<PrimeFactor> found;
  Natural rest = phi_value;
  auto take = [&](std::uint64_t q) -> bool {
    if (q < 2 || q >= bound) return false;
    if (unsigned e = divide_out(rest, q)) {
      found.push_back({from_u64(q), e});
      return true;
    }
    return false;
  };
  // Intrinsic primes (those dividing d), and 2, which the odd-modulus kernels skip.
  for (std::uint64_t r : distinct_prime_factors_u64(d)) take(r);
  take(2);

  std::optional<std::uint32_t> base32;
  if (auto v = as_u64(a); v && (*v >> 32) == 0) base32 = static_cast<std::uint32_t>(*v);

  // Remaining prime factors are all = 1 (mod d), so once q^2 exceeds the rest
  // it is 1 or prime.
  auto settled = [&](std::uint64_t next_q) {
    if (rest == 1) return true;
    if (square_exceeds(next_q, rest)) return true;
    if (fits_u64(rest) && is_prime_u64(to_u64(rest))) return true;
    return false;
  };

  bool prime_rest = false;
  if (rest != 1 && bound > 3) {
    auto blocks = progression_for(d, bound);
    std::vector<std::uint32_t> res(kBlock);
    bool changed = true;
    for (std::size_t bi = 0;; ++bi) {
      auto block = blocks->block(bi);
      if (!block) break;
      if (rest == 1) break;
      if (changed && settled(block->moduli().front())) {
        prime_rest = rest != 1;
        break;
      }
      changed = false;
      if (base32) {
        kernels::pow_mod_batch(*block, *base32, d, res);
        for (std::size_t i = 0; i < block->size(); ++i) {
          if (res[i] == 1 && take(block->moduli()[i])) changed = true;
        }
      } else {
        const auto limbs = limbs_of(rest);
        kernels::residue_batch(*block, limbs, res);
        for (std::size_t i = 0; i < block->size(); ++i) {
          if (res[i] == 0 && take(block->moduli()[i])) changed = true;
        }
      }
      // square test is cheap; re-check it even without a hit
      if (!changed && rest != 1 && square_exceeds(block->moduli().back(), rest)) {
        prime_rest = true;
        break;
      }
    }
  }
  if (prime_rest && rest != 1) {
    if (d > 1 && mpz_fdiv_ui(rest.get_mpz_t(), d) != 1 % d) {
      throw std::logic_error("primitive prime factor " + rest.get_str() + " of Phi_" +
                             std::to_string(d) + " is not 1 mod " + std::to_string(d));
    }
    if (cmp(rest, bound) < 0) {
      found.push_back({rest, 1});
      rest = 1;
    }
  }
  for (const auto& f : found) {
    const bool intrinsic = d % to_u64(f.prime) == 0 || f.prime == 2;
    if (!intrinsic && d > 1 && mpz_fdiv_ui(f.prime.get_mpz_t(), d) != 1) {
      throw std::logic_error("non-primitive prime in the congruence scan");
    }
  }
  return {Factorization(std::move(found)), std::move(rest)};
}

}  // namespace phistar

namespace phistar {

std::vector<std::uint32_t> primitive_primes_below(std::uint32_t a, std::uint64_t d, std::uint64_t bound) {
  if (d == 0) throw DomainError("order must be >= 1");
  check_bound(bound);
  std::vector<std::uint32_t> hits;
  if (bound <= 3) return hits;
  auto blocks = progression_for(d, bound);
  std::vector<std::uint32_t> res(kBlock);
  for (std::size_t bi = 0;; ++bi) {
    auto block = blocks->block(bi);
    if (!block) break;
    kernels::pow_mod_batch(*block, a, d, res);
    for (std::size_t i = 0; i < block->size(); ++i) {
      const std::uint32_t q = block->moduli()[i];
      if (res[i] == 1 && d % q != 0) hits.push_back(q);
    }
  }
  if (hits.empty() || d == 1) return hits;
  // Drop q whose order is a proper divisor of d.
  kernels::ModulusBatch batch(hits);
  std::vector<std::uint32_t> r(hits.size());
  std::vector<bool> keep(hits.size(), true);
  for (std::uint64_t prime : distinct_prime_factors_u64(d)) {
    kernels::pow_mod_batch(batch, a, d / prime, r);
    for (std::size_t i = 0; i < hits.size(); ++i)
      if (r[i] == 1) keep[i] = false;
  }
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (keep[i]) out.push_back(hits[i]);
  return out;
}

}  // namespace phistar
