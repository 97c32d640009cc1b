#include "phistar/kernels.hpp"

namespace phistar::kernels::scalar {

// Reference implementations: plain 64-bit remainder arithmetic, no Montgomery
// form, so they check the vector paths independently.

void pow_mod(const std::uint32_t* q, std::size_t n, std::uint32_t base, std::uint64_t exponent,
             std::uint32_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t m = q[i];
    std::uint64_t b = base % m;
    std::uint64_t r = 1 % m;
    for (std::uint64_t e = exponent; e; e >>= 1) {
      if (e & 1) r = r * b % m;
      b = b * b % m;
    }
    out[i] = static_cast<std::uint32_t>(r);
  }
}

void residue(const std::uint32_t* q, std::size_t n, const std::uint32_t* limbs,
             std::size_t limb_count, std::uint32_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t m = q[i];
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < limb_count; ++j) r = ((r << 32) | limbs[j]) % m;
    out[i] = static_cast<std::uint32_t>(r);
  }
}

}  // namespace phistar::kernels::scalar
