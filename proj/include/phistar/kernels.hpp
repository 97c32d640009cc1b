#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace phistar::kernels {

// Batched modular arithmetic over many small odd moduli. Every kernel has a
// scalar reference implementation and an AVX2 variant; the active one is
// chosen at first use from the CPU's feature flags (PHISTAR_ISA=scalar forces
// the reference path).

enum class Isa { Scalar, Avx2 };

Isa detected_isa();
Isa active_isa();
void set_active_isa(Isa isa);  // throws std::invalid_argument if unsupported
std::string_view isa_name(Isa isa);

/// Odd moduli q < 2^31 with their Montgomery constants (R = 2^32).
class ModulusBatch {
 public:
  ModulusBatch() = default;
  explicit ModulusBatch(std::vector<std::uint32_t> moduli);

  std::size_t size() const noexcept { return modulus_.size(); }
  bool empty() const noexcept { return modulus_.empty(); }
  std::span<const std::uint32_t> moduli() const noexcept { return modulus_; }
  std::span<const std::uint32_t> neg_inverse() const noexcept { return neg_inv_; }
  std::span<const std::uint32_t> r_squared() const noexcept { return r2_; }

  ModulusBatch slice(std::size_t first, std::size_t count) const;

 private:
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> neg_inv_;
  std::vector<std::uint32_t> r2_;
};

/// out[i] = base^exponent mod q[i]; base < 2^32.
void pow_mod_batch(const ModulusBatch& batch, std::uint32_t base, std::uint64_t exponent,
                   std::span<std::uint32_t> out);

/// out[i] = N mod q[i], where N is given by 32-bit limbs, most significant first.
void residue_batch(const ModulusBatch& batch, std::span<const std::uint32_t> limbs_msf,
                   std::span<std::uint32_t> out);

namespace scalar {
void pow_mod(const std::uint32_t* q, std::size_t n, std::uint32_t base, std::uint64_t exponent,
             std::uint32_t* out);
void residue(const std::uint32_t* q, std::size_t n, const std::uint32_t* limbs,
             std::size_t limb_count, std::uint32_t* out);
}  // namespace scalar

namespace avx2 {
void pow_mod(const std::uint32_t* q, const std::uint32_t* neg_inv, const std::uint32_t* r2,
             std::size_t n, std::uint32_t base, std::uint64_t exponent, std::uint32_t* out);
void residue(const std::uint32_t* q, const std::uint32_t* neg_inv, const std::uint32_t* r2,
             std::size_t n, const std::uint32_t* limbs, std::size_t limb_count,
             std::uint32_t* out);
}  // namespace avx2

}  // namespace phistar::kernels
