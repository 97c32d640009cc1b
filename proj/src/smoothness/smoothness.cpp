#include "phistar/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "phistar/cyclotomic.hpp"
#include "phistar/errors.hpp"
#include "phistar/primes.hpp"
#include "phistar/smooth_part.hpp"

namespace phistar {
namespace {

constexpr std::uint64_t kMaxTrialBound = std::uint64_t{1} << 31;

std::uint64_t trial_bound(const Natural& B) {
  if (sgn(B) < 0 || cmp(B, kMaxTrialBound) > 0) throw DomainError("bound must be <= 2^31");
  return to_u64(B);
}

// The base-2 Wieferich primes; the search for more has covered every prime
// below 6.7e15, far beyond any bound accepted here.
const std::vector<std::uint64_t> kWieferich = {1093, 3511};

long double cutoff_rhs(long double B, long double k) {
  const long double logW = std::log(1093.0L * 3511.0L);
  return (2.0L / std::log(3.0L)) * (B * std::log(B) + k * logW + k * std::log(k));
}

bool direct_smooth(const Natural& a, std::uint64_t d, std::uint64_t B) {
  const Natural phi = cyclotomic_value(d, a);
  return cyclotomic_smooth_part(a, d, phi, B).cofactor == 1;
}

std::vector<std::uint64_t> descending_divisors(std::uint64_t k) {
  auto d = divisors_u64(k);
  std::reverse(d.begin(), d.end());
  return d;
}

}  // namespace

SmoothnessVerdict is_shifted_smooth(const Natural& a, std::uint64_t k, const Natural& B) {
  if (cmp(a, 2) < 0 || k == 0) throw DomainError("is_shifted_smooth needs a >= 2 and k >= 1");
  const std::uint64_t bound = trial_bound(B);
  SmoothnessVerdict v{a, k, B, false, {}, 1};
  for (std::uint64_t d : divisors_u64(k)) {
    const Natural phi = cyclotomic_value(d, a);
    SmoothSplit part = cyclotomic_smooth_part(a, d, phi, bound);
    v.factors_found *= part.smooth;
    v.residual *= part.cofactor;
  }
  v.smooth = v.residual == 1;
  return v;
}

bool cyclotomic_is_smooth(std::uint64_t a, std::uint64_t d, std::uint64_t B) {
  if (a < 2 || d == 0) throw DomainError("cyclotomic_is_smooth needs a >= 2 and d >= 1");
  if (B > kMaxTrialBound) throw DomainError("bound must be <= 2^31");
  // Cases without a guaranteed primitive prime go straight to trial division.
  if (d <= 2 || (a == 2 && d == 6) || (a >> 32)) return direct_smooth(from_u64(a), d, B);
  if (primitive_primes_below(static_cast<std::uint32_t>(a), d, B).empty()) return false;
  return direct_smooth(from_u64(a), d, B);
}

bool ExponentCutoff::admits(std::uint64_t k) const {
  if (k == 0 || k > k_max) return false;
  if (k == 1) return true;
  const long double lhs = static_cast<long double>(k) * static_cast<long double>(euler_phi_u64(k));
  const long double rhs = cutoff_rhs(static_cast<long double>(to_u64(bound)), static_cast<long double>(k));
  return lhs <= rhs * (1.0L + 1e-12L);
}

ExponentCutoff exponent_cutoff(const Natural& B, const Natural& base) {
  if (base != 2) throw DomainError("exponent_cutoff is only available for base 2");
  if (cmp(B, 100) < 0) throw DomainError("exponent_cutoff needs B >= 100");
  const std::uint64_t b = trial_bound(B);
  ExponentCutoff c;
  c.bound = B;
  for (auto w : kWieferich) c.wieferich_primes.push_back(from_u64(w));

  // Over [P_j, P_{j+1}) (consecutive primorials) phi(k)/k >= prod_{p <= p_j} (1 - 1/p),
  // so k^2 * ratio <= rhs(k) bounds the surviving k in each interval.
  const long double Bl = static_cast<long double>(b);
  long double ratio = 1.0L;
  long double lo = 1.0L;
  std::uint64_t p = 1;
  std::uint64_t k_max = 1;
  bool dead_before = false;
  for (int j = 0; j < 16; ++j) {
    std::uint64_t next_p = next_prime_u64(p);
    const long double hi = lo * static_cast<long double>(next_p);  // P_{j+1}
    auto fails = [&](long double k) { return k * k * ratio > cutoff_rhs(Bl, k); };
    if (!fails(std::max(lo, 2.0L))) {
      // Largest k in [lo, hi) that may survive.
      long double left = std::max(lo, 2.0L), right = hi - 1;
      if (!fails(right)) {
        left = right;
      } else {
        while (right - left > 0.5L) {
          const long double mid = std::floor((left + right) / 2);
          if (fails(mid)) right = mid; else left = mid;
          if (right - left <= 1) break;
        }
      }
      k_max = std::max<std::uint64_t>(k_max, static_cast<std::uint64_t>(left));
      dead_before = false;
    } else if (dead_before) {
      break;  // k^2 * ratio grows faster than rhs from here on
    } else {
      dead_before = true;
    }
    ratio *= 1.0L - 1.0L / static_cast<long double>(next_p);
    lo = hi;
    p = next_p;
  }
  c.k_max = std::min<std::uint64_t>(k_max, b - 2);
  return c;
}

std::vector<std::uint64_t> smooth_exponents_base2(
    const Natural& B, const std::function<void(std::uint64_t, std::uint64_t)>& progress) {
  if (cmp(B, 2) < 0) throw DomainError("smooth_exponents_base2 needs B >= 2");
  const std::uint64_t b = trial_bound(B);
  std::optional<ExponentCutoff> cutoff;
  std::uint64_t k_max;
  if (b >= 100) {
    cutoff = exponent_cutoff(B);
    k_max = cutoff->k_max;
  } else {
    k_max = std::max<std::uint64_t>(6, b - 2);
  }
  std::vector<char> ok(k_max + 1, 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    if (progress && (k % 1024 == 0 || k == k_max)) progress(k, k_max);
    bool alive = k == 1 || !cutoff || cutoff->admits(k);
    if (alive && k > 1) {
      for (std::uint64_t r : distinct_prime_factors_u64(k)) {
        if (!ok[k / r]) {
          alive = false;
          break;
        }
      }
    }
    if (alive && k > 1) alive = cyclotomic_is_smooth(2, k, b);
    ok[k] = alive;
    if (alive) out.push_back(k);
  }
  return out;
}

std::vector<Natural> smooth_prime_powers(const Natural& p_bound, const Natural& B, std::uint64_t k,
                                         const TableOptions& options) {
  if (k < 2) throw DomainError("smooth_prime_powers needs k >= 2");
  const std::uint64_t b = trial_bound(B);
  if (sgn(p_bound) < 0 || cmp(p_bound, std::uint64_t{1} << 32) >= 0)
    throw DomainError("prime bound must be below 2^32");
  const std::uint64_t pb = to_u64(p_bound);
  const auto divisors = descending_divisors(k);
  auto sieve = sieve_covering(pb + 1);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t p : sieve->primes()) {
    if (p > pb) break;
    if (p == 2) {
      if (options.two == TwoPolicy::Never) continue;
      if (options.two == TwoPolicy::OddExponentsOnly && k % 2 == 0) continue;
    }
    primes.push_back(p);
  }

  // Checkpoint file: a header line naming the job, then one line per finished
  // block: `<first index> <count> : p p p`.
  std::ostringstream header;
  header << "# table k=" << k << " B=" << b << " pbound=" << pb << " block=" << options.block_primes
         << " two=" << static_cast<int>(options.two);
  std::map<std::size_t, std::vector<std::uint32_t>> done;
  if (options.checkpoint) {
    std::ifstream in(*options.checkpoint);
    std::string line;
    if (in && std::getline(in, line) && line == header.str()) {
      while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::size_t first = 0, count = 0;
        std::string colon;
        if (!(ls >> first >> count >> colon) || colon != ":") break;
        std::vector<std::uint32_t> hits;
        std::uint32_t p;
        while (ls >> p) hits.push_back(p);
        done[first] = std::move(hits);
      }
    } else {
      std::ofstream out(*options.checkpoint, std::ios::trunc);
      out << header.str() << '\n';
    }
  }

  std::vector<Natural> result;
  const std::size_t block = std::max<std::size_t>(1, options.block_primes);
  for (std::size_t first = 0; first < primes.size(); first += block) {
    const std::size_t count = std::min(block, primes.size() - first);
    std::vector<std::uint32_t> hits;
    if (auto it = done.find(first); it != done.end()) {
      hits = it->second;
    } else {
      for (std::size_t i = first; i < first + count; ++i) {
        const std::uint32_t p = primes[i];
        bool smooth = true;
        for (std::uint64_t d : divisors) {
          if (!cyclotomic_is_smooth(p, d, b)) {
            smooth = false;
            break;
          }
        }
        if (smooth) hits.push_back(p);
      }
      if (options.checkpoint) {
        std::ofstream out(*options.checkpoint, std::ios::app);
        out << first << ' ' << count << " :";
        for (auto p : hits) out << ' ' << p;
        out << '\n';
      }
    }
    for (auto p : hits) {
      if (options.on_hit) options.on_hit(p);
      result.push_back(from_u64(p));
    }
  }
  return result;
}

std::vector<std::uint64_t> odd_exponent_support(const Natural& p, const Natural& B, const Natural& power_cap) {
  const std::uint64_t b = trial_bound(B);
  if (p == 2 || !is_prime(p) || cmp(p, B) >= 0) throw DomainError("odd_exponent_support needs an odd prime p < B");
  const std::uint64_t pu = to_u64(p);
  // Largest k with p^k <= cap.
  std::uint64_t k_cap = 0;
  {
    Natural x = p;
    while (cmp(x, power_cap) <= 0 && k_cap < b) {
      ++k_cap;
      x *= p;
    }
  }
  const std::uint64_t k_limit = std::min<std::uint64_t>(k_cap, std::max<std::uint64_t>(2, b >= 2 ? b - 2 : 0));
  std::vector<char> ok(k_limit + 1, 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k <= k_limit; ++k) {
    bool alive = true;
    for (std::uint64_t r : distinct_prime_factors_u64(k)) {
      if (!ok[k / r]) {
        alive = false;
        break;
      }
    }
    if (alive) alive = cyclotomic_is_smooth(pu, k, b);
    ok[k] = alive;
    if (alive) out.push_back(k);
  }
  return out;
}

std::string table_csv(const std::vector<std::pair<std::uint64_t, std::vector<Natural>>>& rows) {
  auto sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::string s = "k,p\n";
  for (auto& [k, ps] : sorted) {
    auto v = ps;
    std::sort(v.begin(), v.end());
    for (const auto& p : v) s += std::to_string(k) + "," + to_decimal(p) + "\n";
  }
  return s;
}

}  // namespace phistar
