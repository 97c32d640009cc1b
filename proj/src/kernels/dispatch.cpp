#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "phistar/kernels.hpp"

namespace phistar::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* forced = std::getenv("PHISTAR_ISA");
  if (forced && std::string(forced) == "scalar") return Isa::Scalar;
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
    throw std::invalid_argument("AVX2 kernels requested on a CPU without AVX2");
  }
  active().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

ModulusBatch::ModulusBatch(std::vector<std::uint32_t> moduli) : modulus_(std::move(moduli)) {
  neg_inv_.resize(modulus_.size());
  r2_.resize(modulus_.size());
  for (std::size_t i = 0; i < modulus_.size(); ++i) {
    const std::uint32_t q = modulus_[i];
    if (q < 3 || q % 2 == 0 || q >= (1u << 31)) {
      throw std::invalid_argument("ModulusBatch needs odd moduli in [3, 2^31): " + std::to_string(q));
    }
    std::uint32_t inv = q;  // correct to 3 bits for odd q
    for (int k = 0; k < 4; ++k) inv *= 2u - q * inv;
    neg_inv_[i] = 0u - inv;
    const std::uint64_t r = (std::uint64_t{1} << 32) % q;
    r2_[i] = static_cast<std::uint32_t>(r * r % q);
  }
}

ModulusBatch ModulusBatch::slice(std::size_t first, std::size_t count) const {
  ModulusBatch b;
  auto take = [&](const std::vector<std::uint32_t>& v) {
    return std::vector<std::uint32_t>(v.begin() + first, v.begin() + first + count);
  };
  b.modulus_ = take(modulus_);
  b.neg_inv_ = take(neg_inv_);
  b.r2_ = take(r2_);
  return b;
}

void pow_mod_batch(const ModulusBatch& batch, std::uint32_t base, std::uint64_t exponent,
                   std::span<std::uint32_t> out) {
  const std::size_t n = batch.size();
  if (out.size() < n) throw std::invalid_argument("pow_mod_batch: output too small");
  std::size_t done = 0;
  if (active_isa() == Isa::Avx2) {
    done = n & ~std::size_t{3};
    avx2::pow_mod(batch.moduli().data(), batch.neg_inverse().data(), batch.r_squared().data(), done,
                  base, exponent, out.data());
  }
  scalar::pow_mod(batch.moduli().data() + done, n - done, base, exponent, out.data() + done);
}

void residue_batch(const ModulusBatch& batch, std::span<const std::uint32_t> limbs_msf,
                   std::span<std::uint32_t> out) {
  const std::size_t n = batch.size();
  if (out.size() < n) throw std::invalid_argument("residue_batch: output too small");
  std::size_t done = 0;
  if (active_isa() == Isa::Avx2) {
    done = n & ~std::size_t{3};
    avx2::residue(batch.moduli().data(), batch.neg_inverse().data(), batch.r_squared().data(), done,
                  limbs_msf.data(), limbs_msf.size(), out.data());
  }
  scalar::residue(batch.moduli().data() + done, n - done, limbs_msf.data(), limbs_msf.size(),
                  out.data() + done);
}

}  // namespace phistar::kernels
