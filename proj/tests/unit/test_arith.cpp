#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "phistar/cyclotomic.hpp"
#include "phistar/errors.hpp"
#include "phistar/factor_cache.hpp"
#include "phistar/factorize.hpp"
#include "phistar/primes.hpp"
#include "phistar/smooth_part.hpp"

using namespace phistar;

TEST_CASE("natural parsing and conversion") {
  CHECK(parse_natural("0") == 0);
  CHECK(to_decimal(parse_natural("18446744073709551616")) == "18446744073709551616");
  CHECK_THROWS_AS(parse_natural("-3"), ParseError);
  CHECK_THROWS_AS(parse_natural("12a"), ParseError);
  CHECK_THROWS_AS(parse_natural(""), ParseError);
  CHECK(fits_u64(from_u64(~std::uint64_t{0})));
  CHECK_FALSE(fits_u64(pow_natural(2, 64)));
  CHECK(to_u64(from_u64(0xdeadbeefcafef00dULL)) == 0xdeadbeefcafef00dULL);
  CHECK_THROWS_AS(to_u64(pow_natural(2, 64)), DomainError);
  CHECK(valuation(pow_natural(3, 20) * 7, 3) == 20);
  CHECK(to_string(make_rational(6, 4)) == "3/2");
  CHECK(is_integral(make_rational(8, 4)));
}

TEST_CASE("factorization canonical form and parsing") {
  Factorization f{{5, 1}, {2, 32}, {3, 1}};
  CHECK(f.to_string() == "2^32*3*5");
  CHECK(f.to_explicit_string() == "2^32*3^1*5^1");
  CHECK(Factorization::parse("2^32*3*5") == f);
  CHECK(Factorization::parse("1").empty());
  CHECK(Factorization{}.to_string() == "1");
  CHECK(Factorization::parse("3*3") == Factorization{{3, 2}});
  CHECK_THROWS(Factorization::parse("2^0"));
  CHECK_THROWS(Factorization::parse("2^"));
  CHECK(f.value() == pow_natural(2, 32) * 15);
  CHECK(f.largest_prime() == 5);
  CHECK(f.exponent_of(2) == 32);
  CHECK(f.exponent_of(7) == 0);
}

TEST_CASE("primality agrees with naive trial division") {
  for (std::uint64_t n = 0; n < 20000; ++n) CHECK(is_prime_u64(n) == oracle::is_prime_naive(n));
  oracle::Gen g(7);
  for (int i = 0; i < 300; ++i) {
    std::uint64_t n = g.range(1ull << 30, 1ull << 40);
    REQUIRE(is_prime_u64(n) == oracle::is_prime_naive(n));
  }
  // strong pseudoprimes to several small bases
  CHECK_FALSE(is_prime_u64(3215031751ULL));
  CHECK_FALSE(is_prime_u64(3825123056546413051ULL));
  CHECK(is_prime_u64(18446744073709551557ULL));
  CHECK(is_prime(parse_natural("170141183460469231731687303715884105727")));  // 2^127 - 1
  CHECK_FALSE(is_prime(pow_natural(2, 128) - 1));
}

TEST_CASE("sieve and progressions") {
  PrimeSieve s(1000);
  CHECK(s.primes().size() == 168);
  auto prog = s.progression(10, 200);
  std::vector<std::uint32_t> want;
  for (std::uint32_t q = 2; q < 200; ++q)
    if (oracle::is_prime_naive(q) && q % 10 == 1) want.push_back(q);
  CHECK(prog == want);
  auto odd = s.progression(2, 30);
  CHECK(odd == std::vector<std::uint32_t>{3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(next_prime_u64(1) == 2);
  CHECK(next_prime_u64(7) == 11);
}

TEST_CASE("factorize_u64 matches trial division") {
  oracle::Gen g(11);
  for (int i = 0; i < 400; ++i) {
    std::uint64_t n = g.range(2, 1ull << 36);
    auto got = factorize_u64(n);
    auto want = oracle::trial_factor(n);
    REQUIRE(got.size() == want.size());
    std::size_t k = 0;
    for (auto [p, e] : want) {
      CHECK(got[k].first == p);
      CHECK(got[k].second == e);
      ++k;
    }
  }
  auto big = factorize_u64(18446744073709551615ULL);  // 2^64 - 1
  CHECK(big == SmallFactorization{{3, 1}, {5, 1}, {17, 1}, {257, 1}, {641, 1}, {65537, 1}, {6700417, 1}});
}

TEST_CASE("factorize multiplies back and has prime parts") {
  oracle::Gen g(3);
  for (int i = 0; i < 40; ++i) {
    Natural n = 1;
    const int parts = 1 + static_cast<int>(g.below(4));
    for (int j = 0; j < parts; ++j) n *= from_u64(g.range(2, 1ull << 30));
    Factorization f = factorize(n);
    CHECK(f.value() == n);
    for (const auto& pf : f.factors()) CHECK(is_prime(pf.prime));
  }
  Factorization f = factorize(from_u64(1000000000039) * from_u64(1000000000061) * 9);
  CHECK(f.to_string() == "3^2*1000000000039*1000000000061");
}

TEST_CASE("effort budget is reported through the cofactor") {
  Effort tiny{10, 0, 0};
  Natural semi = from_u64(1000003) * from_u64(1000033) * from_u64(999983);
  auto part = try_factorize(semi * 8, tiny);
  REQUIRE(part.unfactored.has_value());
  CHECK(part.found.to_string() == "2^3");
  CHECK(*part.unfactored == semi);
  CHECK_THROWS_AS(factorize(semi, tiny), EffortExceeded);
}

TEST_CASE("cyclotomic values match recursive division") {
  for (std::uint64_t k = 1; k <= 60; ++k) {
    for (std::uint64_t a : {2, 3, 10, 12345}) {
      CHECK(cyclotomic_value(k, from_u64(a)) == oracle::cyclotomic(k, from_u64(a)));
    }
  }
  CHECK(multiplicative_order(2, 7) == 3);
  CHECK(multiplicative_order(2, 31) == 5);
  CHECK(multiplicative_order(10, 7) == 6);
  CHECK_THROWS_AS(multiplicative_order(7, 7), DomainError);
  CHECK(mobius_u64(30) == -1);
  CHECK(mobius_u64(12) == 0);
  CHECK(euler_phi_u64(36) == 12);
  CHECK(divisors_u64(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("power-minus-one factorization") {
  for (std::uint64_t k = 1; k <= 64; ++k) {
    Factorization f = factorize_power_minus_one(2, k);
    CHECK(f.value() == pow_natural(2, k) - 1);
    for (const auto& pf : f.factors()) CHECK(is_prime(pf.prime));
  }
  Factorization f = factorize_power_minus_one(2, 210);
  CHECK(f.omega() == 20);
  CHECK(f.exponent_of(3) == 2);
  oracle::Gen g(5);
  for (int i = 0; i < 30; ++i) {
    std::uint64_t p = g.range(3, 5000) | 1;
    std::uint64_t k = g.range(1, 12);
    Factorization h = factorize_power_minus_one(from_u64(p), k);
    CHECK(h.value() == pow_natural(p, k) - 1);
  }
}

TEST_CASE("smooth parts") {
  SUBCASE("plain") {
    auto s = smooth_part(from_u64(2ull * 2 * 3 * 101 * 1000003), 1000);
    CHECK(s.smooth.to_string() == "2^2*3*101");
    CHECK(s.cofactor == 1000003);
  }
  SUBCASE("filtered by residue plus extra primes") {
    auto s = smooth_part(from_u64(3ull * 11 * 31 * 7), 100, ResidueFilter{10}, std::vector<std::uint64_t>{3});
    CHECK(s.smooth.to_string() == "3*11*31");
    CHECK(s.cofactor == 7);
  }
  SUBCASE("cyclotomic split agrees with generic split") {
    oracle::Gen g(13);
    for (int i = 0; i < 200; ++i) {
      std::uint64_t a = g.range(2, 2000);
      std::uint64_t d = g.range(1, 40);
      Natural phi = cyclotomic_value(d, from_u64(a));
      std::uint64_t bound = g.range(10, 100000);
      auto c = cyclotomic_smooth_part(from_u64(a), d, phi, bound);
      auto s = smooth_part(phi, bound);
      CHECK(c.smooth == s.smooth);
      CHECK(c.cofactor == s.cofactor);
    }
  }
  SUBCASE("large base uses residues") {
    Natural a = pow_natural(10, 12) + 39;
    Natural phi = cyclotomic_value(3, a);
    auto c = cyclotomic_smooth_part(a, 3, phi, 1u << 20);
    auto s = smooth_part(phi, 1u << 20);
    CHECK(c.smooth == s.smooth);
    CHECK(c.cofactor == s.cofactor);
  }
}

TEST_CASE("factor cache round trip") {
  auto dir = std::filesystem::temp_directory_path() / "phistar_cache_test";
  std::filesystem::remove_all(dir);
  auto file = dir / "cache.txt";
  Natural n = pow_natural(2, 64) + 1;
  {
    FactorCache cache(file);
    Factorization f = factorize(n, {}, &cache);
    CHECK(cache.size() == 1);
    CHECK(cache.lookup(n) == f);
  }
  {
    std::ofstream out(file, std::ios::app);
    out << "15=3*7\n";
    out << "garbage\n";
  }
  FactorCache cache(file);
  CHECK(cache.load_report().entries == 1);
  CHECK(cache.load_report().rejected == 2);
  CHECK_FALSE(cache.load_report().canonical);
  cache.flush();
  FactorCache again(file);
  CHECK(again.load_report().canonical);
  CHECK(again.serialize() == "18446744073709551617=274177^1*67280421310721^1\n");
  CHECK(again.verify().empty());
  CHECK(FactorCache::parse_entry("1=1").has_value());
  std::filesystem::remove_all(dir);
}
