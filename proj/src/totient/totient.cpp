#include "phistar/totient.hpp"

#include <algorithm>
#include <stdexcept>

#include "phistar/errors.hpp"
#include "phistar/primes.hpp"

namespace phistar {

Natural PrimePower::value() const { return pow_natural(p, e); }

std::string PrimePower::to_string() const {
  std::string s = to_decimal(p);
  if (e != 1) s += "^" + std::to_string(e);
  return s;
}

PrimePower PrimePower::parse(std::string_view text) {
  Factorization f = Factorization::parse(text);
  if (f.omega() != 1 || !is_prime(f.factors()[0].prime))
    throw ParseError("not a prime power: " + std::string(text));
  return {f.factors()[0].prime, f.factors()[0].exponent};
}

Natural phi_star(const Factorization& n) {
  Natural r = 1;
  for (const auto& f : n.factors()) r *= pow_natural(f.prime, f.exponent) - 1;
  return r;
}

ExactRational h_ratio(const Factorization& n) { return make_rational(n.value(), phi_star(n)); }

bool is_unitary_divisor(const Natural& d, const Natural& n) {
  if (sgn(d) <= 0 || sgn(n) <= 0) return false;
  if (!mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) return false;
  Natural rest = n / d;
  Natural g;
  mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), rest.get_mpz_t());
  return g == 1;
}

std::string_view source_name(SolutionSource s) {
  switch (s) {
    case SolutionSource::KnownList: return "known";
    case SolutionSource::SearchDiscovered: return "search";
    case SolutionSource::UserSupplied: return "user";
  }
  return "?";
}

std::optional<SolutionRecord> is_solution(const Factorization& n, SolutionSource source) {
  ExactRational h = h_ratio(n);
  if (!is_integral(h)) return std::nullopt;
  return SolutionRecord{n, h, source};
}

const std::vector<SolutionRecord>& known_solutions() {
  static const std::vector<SolutionRecord> list = [] {
    static constexpr const char* kText[] = {
        "1",
        "2",
        "2*3",
        "2^2*3",
        "2^3*3*7",
        "2^4*3*5",
        "2^5*3*5*31",
        "2^8*3*5*17",
        "2^11*3*5*11^2*23*89",
        "2^16*3*5*17*257",
        "2^17*3*5*17*257*131071",
        "2^32*3*5*17*257*65537",
    };
    std::vector<SolutionRecord> out;
    for (const char* t : kText) {
      auto rec = is_solution(Factorization::parse(t), SolutionSource::KnownList);
      if (!rec) throw std::logic_error(std::string("embedded solution fails verification: ") + t);
      out.push_back(std::move(*rec));
    }
    return out;
  }();
  return list;
}

bool two_adic_capacity_ok(const Factorization& n, unsigned f) {
  unsigned used = f;
  for (const auto& pf : n.factors()) {
    if (pf.prime == 2) continue;
    Natural pm1 = pf.prime - 1;
    used += static_cast<unsigned>(mpz_scan1(pm1.get_mpz_t(), 0));
  }
  return used <= n.exponent_of(2);
}

Natural cooper_bound(unsigned r) {
  if (r > 40) throw DomainError("cooper_bound: r too large to materialise");
  const unsigned long lo = 1ul << r;
  return pow_natural(2, 2 * lo) - pow_natural(2, lo);
}

Natural max_prime_power_bound(unsigned r) {
  if (r == 0) throw DomainError("max_prime_power_bound needs r >= 1");
  if (r > 40) throw DomainError("max_prime_power_bound: r too large");
  return pow_natural(2, 1ul << (r - 1));
}

Natural max_prime_power_bound_all_primes(unsigned r) {
  if (r == 0) throw DomainError("max_prime_power_bound needs r >= 1");
  if (r > 40) throw DomainError("max_prime_power_bound: r too large");
  return pow_natural(2, 1ul << r);
}

namespace {

void divisors_of(const std::vector<std::pair<Natural, unsigned>>& f, std::size_t i, const Natural& acc,
                 std::vector<Natural>& out) {
  if (i == f.size()) {
    out.push_back(acc);
    return;
  }
  Natural x = acc;
  for (unsigned e = 0; e <= f[i].second; ++e) {
    divisors_of(f, i + 1, x, out);
    x *= f[i].first;
  }
}

}  // namespace

std::vector<Natural> next_prime_candidates(const Factorization& m, const ExactRational& h_target,
                                           unsigned r_total) {
  unsigned k = 0;
  for (const auto& pf : m.factors())
    if (pf.prime != 2) ++k;
  if (r_total < k + 1) throw DomainError("r_total must exceed the number of odd primes of m");
  const Natural phi = phi_star(m);
  // m / gcd(m, phi*(m)) through valuations of the known primes of m.
  std::vector<std::pair<Natural, unsigned>> quotient;
  for (const auto& pf : m.factors()) {
    const unsigned v = valuation(phi, pf.prime);
    if (pf.exponent > v) quotient.emplace_back(pf.prime, pf.exponent - v);
  }
  std::vector<Natural> divs;
  divisors_of(quotient, 0, Natural(1), divs);

  const Natural largest = m.empty() ? Natural(1) : m.largest_prime();
  const ExactRational need = h_target / h_ratio(m);
  const unsigned t = r_total - k;
  std::vector<Natural> out;
  for (const Natural& d : divs) {
    Natural p = d + 1;
    if (cmp(p, largest) <= 0 || !is_prime(p)) continue;
    ExactRational ratio = make_rational(pow_natural(p, t), pow_natural(Natural(p - 1), t));
    if (ratio >= need) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PrimorialProbe primorial_probe(unsigned r) {
  if (r == 0) throw DomainError("primorial_probe needs r >= 1");
  std::vector<PrimeFactor> f;
  std::uint64_t p = 1;
  for (unsigned i = 0; i < r; ++i) {
    p = next_prime_u64(p);
    f.push_back({from_u64(p), 1});
  }
  Factorization n(std::move(f));
  ExactRational h = h_ratio(n);
  const bool divisible = is_integral(h);
  return {std::move(n), std::move(h), divisible};
}

}  // namespace phistar
