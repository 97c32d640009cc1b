#include <doctest.h>

#include "oracles.hpp"
#include "phistar/kernels.hpp"
#include "phistar/primes.hpp"

using namespace phistar;
using namespace phistar::kernels;

namespace {

ModulusBatch random_batch(oracle::Gen& g, std::size_t n) {
  std::vector<std::uint32_t> q;
  while (q.size() < n) q.push_back(static_cast<std::uint32_t>(g.range(3, (1u << 31) - 1) | 1));
  return ModulusBatch(std::move(q));
}

struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { set_active_isa(saved); }
};

}  // namespace

TEST_CASE("scalar pow_mod matches 128-bit reference") {
  oracle::Gen g(1);
  IsaGuard guard;
  set_active_isa(Isa::Scalar);
  for (int rep = 0; rep < 20; ++rep) {
    auto batch = random_batch(g, 37);
    std::uint32_t base = static_cast<std::uint32_t>(g.below(1ull << 32));
    std::uint64_t e = g.below(1ull << 40);
    std::vector<std::uint32_t> out(batch.size());
    pow_mod_batch(batch, base, e, out);
    for (std::size_t i = 0; i < batch.size(); ++i)
      CHECK(out[i] == oracle::powmod(base, e, batch.moduli()[i]));
  }
}

TEST_CASE("residues match GMP") {
  oracle::Gen g(2);
  IsaGuard guard;
  set_active_isa(Isa::Scalar);
  for (int rep = 0; rep < 20; ++rep) {
    auto batch = random_batch(g, 21);
    std::vector<std::uint32_t> limbs(1 + g.below(12));
    for (auto& l : limbs) l = static_cast<std::uint32_t>(g.below(1ull << 32));
    mpz_class n = 0;
    for (auto l : limbs) n = n * 4294967296.0 + l;
    std::vector<std::uint32_t> out(batch.size());
    residue_batch(batch, limbs, out);
    for (std::size_t i = 0; i < batch.size(); ++i)
      CHECK(out[i] == mpz_fdiv_ui(n.get_mpz_t(), batch.moduli()[i]));
  }
}

TEST_CASE("AVX2 kernels are equivalent to scalar kernels") {
  if (detected_isa() != Isa::Avx2) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  IsaGuard guard;
  oracle::Gen g(3);
  for (int rep = 0; rep < 200; ++rep) {
    auto batch = random_batch(g, 1 + g.below(70));
    if (rep % 5 == 0) batch = ModulusBatch({3, 5, 7, 2147483647u, 2147483629u});
    std::uint32_t base = static_cast<std::uint32_t>(rep % 7 == 0 ? g.below(4) : g.below(1ull << 32));
    std::uint64_t e = rep % 11 == 0 ? g.below(3) : g.below(~0ull);
    std::vector<std::uint32_t> limbs(1 + g.below(20));
    for (auto& l : limbs) l = static_cast<std::uint32_t>(g.below(1ull << 32));
    if (rep % 13 == 0) std::fill(limbs.begin(), limbs.end(), 0xffffffffu);

    std::vector<std::uint32_t> a(batch.size()), b(batch.size()), c(batch.size()), d(batch.size());
    set_active_isa(Isa::Scalar);
    pow_mod_batch(batch, base, e, a);
    residue_batch(batch, limbs, c);
    set_active_isa(Isa::Avx2);
    pow_mod_batch(batch, base, e, b);
    residue_batch(batch, limbs, d);
    REQUIRE(a == b);
    REQUIRE(c == d);
  }
}

TEST_CASE("batch construction rejects bad moduli") {
  CHECK_THROWS(ModulusBatch({4}));
  CHECK_THROWS(ModulusBatch({1}));
  CHECK_THROWS(ModulusBatch({2147483649u}));
  ModulusBatch b({3, 5, 7, 11, 13});
  CHECK(b.slice(1, 3).moduli().size() == 3);
  CHECK(b.slice(1, 3).moduli()[0] == 5);
}
