#include <doctest.h>

#include "oracles.hpp"
#include "phistar/errors.hpp"
#include "phistar/search.hpp"
#include "phistar/totient.hpp"

using namespace phistar;

namespace {

std::vector<std::uint64_t> values(const std::vector<SolutionRecord>& rs) {
  std::vector<std::uint64_t> v;
  for (const auto& r : rs) v.push_back(to_u64(r.value()));
  return v;
}

SearchConfig desk(unsigned B) {
  SearchConfig c;
  c.prime_bound = B;
  c.odd_power_cap = B * B;
  return c;
}

std::vector<std::uint64_t> known_below(std::uint64_t B) {
  std::vector<std::uint64_t> v;
  for (const auto& r : known_solutions())
    if (r.n.empty() || cmp(r.n.largest_prime(), B) < 0) v.push_back(to_u64(r.value()));
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("search at B = 10") {
  auto r = enumerate_solutions(desk(10));
  CHECK(values(r.solutions) == std::vector<std::uint64_t>{1, 2, 6, 12, 168, 240});
  for (const auto& s : r.solutions) CHECK(s.source == SolutionSource::SearchDiscovered);
}

TEST_CASE("search agrees with brute force over smooth numbers") {
  for (unsigned B : {3u, 5u, 7u, 10u, 20u, 32u, 50u, 100u}) {
    INFO("B = " << B);
    auto r = enumerate_solutions(desk(B));
    auto got = values(r.solutions);
    CHECK(got == oracle::smooth_solutions(B, std::uint64_t{B} * B, 10'000'000'000ULL));
    CHECK(got == known_below(B));
  }
}

TEST_CASE("search at B = 100 returns the nine small known solutions") {
  auto r = enumerate_solutions(desk(100));
  REQUIRE(r.solutions.size() == 9);
  CHECK(r.solutions.back().n == Factorization::parse("2^11*3*5*11^2*23*89"));
  for (const auto& s : r.solutions) {
    CHECK(is_solution(s.n));
    CHECK(s.h == h_ratio(s.n));
  }
  // A branch either yields solutions or carries a certificate.
  for (const auto& b : r.branches) {
    if (b.outcome != BranchOutcome::Solution) REQUIRE(b.certificate);
  }
}

TEST_CASE("branch e = 1") {
  auto b = close_and_check(1, desk(100));
  CHECK(b.outcome == BranchOutcome::Solution);
  CHECK(values(b.solutions) == std::vector<std::uint64_t>{2, 6});
}

TEST_CASE("branch e = 0 is N = 1") {
  auto b = close_and_check(0, desk(100));
  CHECK(values(b.solutions) == std::vector<std::uint64_t>{1});
}

TEST_CASE("certificate for e = 210 at cap 10^8") {
  SearchConfig c;
  c.prime_bound = 100000000;
  c.odd_power_cap = 100000000;
  auto b = close_and_check(210, c);
  CHECK(b.outcome == BranchOutcome::Eliminated);
  REQUIRE(b.certificate);
  CHECK(b.certificate->depth == 0);
  CHECK(to_string(b.certificate->contradiction) == "ForcedPowerExceedsCap(3, 22)");
  auto again = close_and_check(210, c);
  CHECK(to_string(again.certificate->contradiction) == to_string(b.certificate->contradiction));
}

TEST_CASE("a non-smooth exponent fails at the root") {
  auto b = close_and_check(11, desk(50));  // 2^11 - 1 = 23 * 89
  REQUIRE(b.certificate);
  CHECK(to_string(b.certificate->contradiction) == "ForcedPowerExceedsCap(89, 1)");
  CHECK(b.certificate->depth == 0);
}

TEST_CASE("certificates replay and parallel width does not change output") {
  auto c1 = desk(100);
  auto c4 = c1;
  c4.parallel_width = 4;
  auto a = enumerate_solutions(c1);
  auto b = enumerate_solutions(c4);
  CHECK(values(a.solutions) == values(b.solutions));
  REQUIRE(a.branches.size() == b.branches.size());
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    const auto& x = a.branches[i];
    const auto& y = b.branches[i];
    CHECK(x.two_exponent == y.two_exponent);
    CHECK(x.nodes == y.nodes);
    CHECK(x.outcome == y.outcome);
    CHECK(x.certificate.has_value() == y.certificate.has_value());
    if (x.certificate) {
      CHECK(to_string(x.certificate->contradiction) == to_string(y.certificate->contradiction));
      CHECK(x.certificate->trail == y.certificate->trail);
      auto replay = close_and_check(x.two_exponent, c1);
      CHECK(to_string(replay.certificate->contradiction) == to_string(x.certificate->contradiction));
    }
  }
}

TEST_CASE("omega cap, h targets and initial segments") {
  auto c = desk(100);
  c.omega_cap = 1;
  CHECK(values(enumerate_solutions(c).solutions) == std::vector<std::uint64_t>{1, 2});
  c.omega_cap = 3;
  CHECK(values(enumerate_solutions(c).solutions) == std::vector<std::uint64_t>{1, 2, 6, 12, 168, 240});

  auto t = desk(100);
  t.h_targets = std::vector<Natural>{3};
  CHECK(values(enumerate_solutions(t).solutions) == std::vector<std::uint64_t>{6});

  auto s = desk(100);
  s.initial_segment_support = true;
  CHECK(values(enumerate_solutions(s).solutions) == std::vector<std::uint64_t>{1, 2, 6, 12, 240});
}

TEST_CASE("prune") {
  auto cfg = desk(100);
  SUBCASE("2-adic capacity") {
    auto st = state_from(Factorization::parse("2^2*3*5"));
    auto v = prune(st, cfg);
    CHECK_FALSE(v.keep);
    REQUIRE(v.reason);
    CHECK(to_string(*v.reason) == "ForcedExceedsUnitary(2)");
    CHECK(st.forced_multiplicity.at(2) == 3);
  }
  SUBCASE("keeps a prefix of a solution") {
    SearchConfig big;
    big.prime_bound = 100000;
    big.odd_power_cap = 100000000;
    auto st = state_from(Factorization::parse("2^16*3*5*17*257"));
    CHECK(prune(st, big).keep);
    CHECK(st.forced_multiplicity.at(2) == 15);
  }
  SUBCASE("closure adds required primes") {
    SearchState st;
    st.two_exponent = 11;
    auto v = prune(st, cfg);
    CHECK(v.keep);
    CHECK(st.assigned.at(23) == 0);
    CHECK(st.assigned.at(89) == 0);
    CHECK(st.assigned.at(11) == 0);  // 23 - 1 = 2 * 11
  }
  SUBCASE("absent prime demanded") {
    auto st = state_from(Factorization::parse("2^3*7"));  // 3 is absent, yet 7 - 1 = 2 * 3
    auto v = prune(st, cfg);
    CHECK_FALSE(v.keep);
    CHECK(to_string(*v.reason) == "ForcedExceedsUnitary(3)");
  }
  SUBCASE("h window") {
    // 2 * 3 has h = 3; adding any prime >= 5 with one spare factor 2 cannot reach 4.
    auto st = state_from(Factorization::parse("2^2*3"));
    CHECK(prune(st, cfg).keep);
    st = state_from(Factorization::parse("2^2*3"));
    cfg.h_targets = std::vector<Natural>{4};
    auto v = prune(st, cfg);
    CHECK_FALSE(v.keep);
    CHECK(to_string(*v.reason) == "HOutOfRange");
  }
}

TEST_CASE("config validation") {
  SearchConfig c;
  c.prime_bound = 2;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.prime_bound = 100;
  c.odd_power_cap = 50;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.odd_power_cap = 100;
  c.omega_cap = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.omega_cap.reset();
  c.two_exponent_set = {3};
  CHECK_THROWS_AS(close_and_check(5, c), DomainError);
}

TEST_CASE("branch e = 32 at B = 10^5, cap 10^8") {
  SearchConfig c;
  c.prime_bound = 100000;
  c.odd_power_cap = 100000000;
  auto b = close_and_check(32, c);
  REQUIRE(b.solutions.size() == 1);
  CHECK(b.solutions[0].n == Factorization::parse("2^32*3*5*17*257*65537"));
}
