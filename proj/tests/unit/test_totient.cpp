#include <doctest.h>

#include <numeric>

#include "corpus.hpp"
#include "oracles.hpp"
#include "phistar/arrow.hpp"
#include "phistar/errors.hpp"
#include "phistar/factorize.hpp"
#include "phistar/primes.hpp"
#include "phistar/totient.hpp"

using namespace phistar;

namespace {
Factorization F(const char* s) { return Factorization::parse(s); }
ExactRational Q(const char* s) {
  ExactRational q(s);
  q.canonicalize();
  return q;
}
}  // namespace

TEST_CASE("phi_star and h_ratio") {
  CHECK(phi_star(F("2^2*3")) == 6);
  CHECK(phi_star(F("1")) == 1);
  CHECK(phi_star(F("2^8*3*5*17")) == 32640);
  CHECK(h_ratio(F("2*3")) == 3);
  CHECK(h_ratio(F("2^4*3*5")) == 2);
  CHECK(h_ratio(F("2^5*3*5*7*11*13*17")) ==
        Q("32/31") * Q("3/2") * Q("5/4") * Q("7/6") * Q("11/10") * Q("13/12") * Q("17/16"));
  CHECK(h_ratio(F("2^5*3*5*7*11*13*17")) < 3);
}

TEST_CASE("phi_star agrees with trial-division oracle") {
  for (std::uint64_t n = 1; n < 3000; ++n) {
    CHECK(phi_star(factorize(from_u64(n))) == oracle::unitary_phi_star(n));
  }
}

TEST_CASE("unitary divisors") {
  CHECK(is_unitary_divisor(4, 12));
  CHECK_FALSE(is_unitary_divisor(2, 12));
  CHECK(is_unitary_divisor(1, 97));
  CHECK_FALSE(is_unitary_divisor(5, 12));
  for (std::uint64_t n = 1; n <= 200; ++n)
    for (std::uint64_t d = 1; d <= n; ++d) {
      bool want = n % d == 0 && std::gcd(d, n / d) == 1;
      REQUIRE(is_unitary_divisor(from_u64(d), from_u64(n)) == want);
    }
}

TEST_CASE("solutions") {
  auto r = is_solution(F("2^5*3*5*31"));
  REQUIRE(r);
  CHECK(r->h == 2);
  CHECK_FALSE(is_solution(F("2^3*3")));
  CHECK(is_solution(F("1"))->h == 1);
  const auto& known = known_solutions();
  REQUIRE(known.size() == 12);
  CHECK(known[8].n == F("2^11*3*5*11^2*23*89"));
  CHECK(known[2].h == 3);
  for (const auto& k : known) CHECK(k.source == SolutionSource::KnownList);
}

TEST_CASE("odd solutions and the 2-adic ledger") {
  CHECK(two_adic_capacity_ok(F("2^4*3*5"), 1));
  CHECK_FALSE(two_adic_capacity_ok(F("2^2*3*5"), 1));
  CHECK_FALSE(two_adic_capacity_ok(F("3*5"), 0));
  CHECK(two_adic_capacity_ok(F("1"), 0));
  // h integral implies even, for every n in range
  for (std::uint64_t n = 3; n < 20000; n += 2) {
    REQUIRE_FALSE(is_integral(h_ratio(factorize(from_u64(n)))));
  }
}

TEST_CASE("h is multiplicative and phi* = phi on squarefree numbers") {
  oracle::Gen g(21);
  int done = 0;
  while (done < 2000) {
    std::uint64_t a = g.range(1, 1'000'000'000), b = g.range(1, 1'000'000'000);
    if (std::gcd(a, b) != 1) continue;
    Factorization fa = factorize(from_u64(a)), fb = factorize(from_u64(b));
    REQUIRE(phi_star(fa * fb) == phi_star(fa) * phi_star(fb));
    ++done;
  }
  for (std::uint64_t m = 1; m <= 20000; ++m) {
    auto f = factorize(from_u64(m));
    if (!f.is_squarefree()) continue;
    Natural tot;
    mpz_class mm = from_u64(m);
    // Euler phi via the oracle's trial factorization
    std::uint64_t phi = m;
    for (auto [p, e] : oracle::trial_factor(m)) phi = phi / p * (p - 1);
    REQUIRE(phi_star(f) == phi);
  }
}

TEST_CASE("Cooper bound and prime-power bound") {
  CHECK(cooper_bound(0) == 2);
  CHECK(cooper_bound(1) == 12);
  CHECK(cooper_bound(5) == pow_natural(2, 64) - pow_natural(2, 32));
  for (const auto& k : known_solutions()) {
    unsigned r = static_cast<unsigned>(k.n.odd_part().omega());
    CHECK(cmp(k.value(), cooper_bound(r)) <= 0);
  }
  CHECK(max_prime_power_bound(5) == 65536);
  CHECK(max_prime_power_bound(6) == pow_natural(2, 32));
  CHECK(max_prime_power_bound(1) == 2);
  CHECK(max_prime_power_bound_all_primes(6) == pow_natural(2, 64));
  CHECK_THROWS_AS(max_prime_power_bound(0), DomainError);
}

TEST_CASE("exponent of a unitary prime power divides N") {
  for (const auto& k : known_solutions()) {
    const Natural n = k.value();
    for (const auto& pf : k.n.factors()) {
      if (pf.exponent > 1) CHECK(mpz_divisible_ui_p(n.get_mpz_t(), pf.exponent));
    }
  }
}

TEST_CASE("next prime candidates") {
  auto to_u = [](const std::vector<Natural>& v) {
    std::vector<unsigned long> o;
    for (auto& x : v) o.push_back(x.get_ui());
    return o;
  };
  CHECK(to_u(next_prime_candidates(F("2^16"), 2, 70000)) == std::vector<unsigned long>{3, 5, 17, 257, 65537});
  CHECK(to_u(next_prime_candidates(F("2^5"), 2, 100)) == std::vector<unsigned long>{3, 5, 17});
  CHECK(next_prime_candidates(F("2^4*3*5"), 2, 3).empty());
  CHECK_THROWS_AS(next_prime_candidates(F("2^4*3*5"), 2, 2), DomainError);
  // the window inequality cuts large primes when few primes remain
  CHECK(next_prime_candidates(F("2^16"), 2, 1).empty());
  auto few = next_prime_candidates(F("2^16"), 2, 2);
  CHECK(to_u(few) == std::vector<unsigned long>{3});
}

TEST_CASE("primorial probe") {
  CHECK(primorial_probe(1).divisible);
  CHECK(primorial_probe(1).h == 2);
  CHECK(primorial_probe(2).h == 3);
  CHECK_FALSE(primorial_probe(3).divisible);
  CHECK(phi_star(primorial_probe(3).n) == 8);
}

TEST_CASE("prime power parsing") {
  CHECK(PrimePower::parse("5^7") == PrimePower{5, 7});
  CHECK(PrimePower::parse("7").to_string() == "7");
  CHECK_THROWS(PrimePower::parse("6"));
  CHECK_THROWS(PrimePower::parse("2*3"));
}

TEST_CASE("arrow chains from the corpus verify") {
  for (const auto& c : corpus::chains()) {
    ArrowChain chain{PrimePower::parse(c.start), {}, PrimePower::parse(c.target)};
    for (const char* s : c.steps) chain.steps.push_back(parse_product(s).value());
    INFO(chain.to_string());
    if (c.note) {
      CHECK_FALSE(verify_chain(chain));
      chain.steps.clear();
      for (const char* s : c.corrected_steps) chain.steps.push_back(parse_product(s).value());
    }
    CHECK(check_chain(chain) == "");
  }
  ArrowChain bad{PrimePower::parse("5^7"), {19531}, PrimePower::parse("3^3")};
  CHECK_FALSE(verify_chain(bad));
}

TEST_CASE("arrow closures reach the corpus targets") {
  for (const auto& c : corpus::closures()) {
    ArrowOptions opt;
    opt.depth = c.depth;
    auto target = PrimePower::parse(c.target);
    auto closure = arrow_closure(PrimePower::parse(c.seed), opt);
    const std::string label = std::string(c.seed) + " depth " + std::to_string(c.depth) + " target " + c.target;
    INFO(label);
    auto e = closure.exponent_of(target.p);
    REQUIRE(e.has_value());
    CHECK(*e >= target.e);
  }
  ArrowOptions opt;
  opt.depth = 1;
  auto three = arrow_closure(PrimePower{3, 1}, opt);
  REQUIRE(three.forced.size() == 1);
  CHECK(three.forced[0] == PrimePower{2, 1});
}

TEST_CASE("arrow closure reports unitary conflicts and is monotone in depth") {
  ArrowOptions opt;
  opt.depth = 2;
  opt.unitary[Natural(3)] = 1;
  auto c = arrow_closure(PrimePower{5, 7}, opt);
  REQUIRE(c.contradiction);
  CHECK(c.contradiction->prime == 3);
  CHECK(c.contradiction->demanded >= 2);
  for (const char* seed : {"5^7", "7^19", "13^3", "3^4"}) {
    std::vector<PrimePower> prev;
    for (unsigned d = 1; d <= 4; ++d) {
      ArrowOptions o;
      o.depth = d;
      auto now = arrow_closure(PrimePower::parse(seed), o).forced;
      for (const auto& pp : prev) {
        auto it = std::find_if(now.begin(), now.end(), [&](const PrimePower& x) { return x.p == pp.p; });
        REQUIRE(it != now.end());
        CHECK(it->e >= pp.e);
      }
      prev = now;
    }
  }
}

TEST_CASE("displayed h evaluations") {
  auto holds = [](const ExactRational& v, corpus::Rel rel, const ExactRational& b) {
    switch (rel) {
      case corpus::Rel::Less: return v < b;
      case corpus::Rel::Greater: return v > b;
      case corpus::Rel::Equal: return v == b;
    }
    return false;
  };
  for (const auto& d : corpus::h_displays()) {
    const std::string label = d.expr;
    INFO(label);
    const bool literal = holds(h_ratio(parse_product(d.expr)), d.rel, Q(d.bound));
    if (d.corrected) {
      CHECK_FALSE(literal);
      CHECK(holds(h_ratio(parse_product(d.corrected)), d.rel, Q(d.bound)));
    } else {
      CHECK(literal);
    }
  }
  for (const auto& d : corpus::fraction_displays()) {
    ExactRational prod = 1;
    for (const char* f : d.factors) prod *= Q(f);
    CHECK(holds(prod, d.rel, Q(d.bound)));
  }
}
