// Compiled with -mavx2. Only reached after the dispatcher has checked CPU
// support. Deliberately free of standard-library templates so no AVX2-encoded
// inline function can be picked up by the linker for other translation units.

#include <cstddef>
#include <cstdint>
#include <immintrin.h>

namespace phistar::kernels::avx2 {
namespace {

// Four lanes, each a 32-bit value zero-extended into a 64-bit slot.
struct Lanes {
  __m256i q;
  __m256i ninv;
  __m256i r2;
};

inline __m256i load4(const std::uint32_t* p) {
  return _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

inline void store4(std::uint32_t* p, __m256i v) {
  // Gather the low dwords of the four 64-bit lanes.
  const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  __m256i packed = _mm256_permutevar8x32_epi32(v, idx);
  _mm_storeu_si128(reinterpret_cast<__m128i*>(p), _mm256_castsi256_si128(packed));
}

// a*b*2^-32 mod q for a*b < 2^32 * q, q < 2^31 odd.
inline __m256i mont_mul(__m256i a, __m256i b, const Lanes& l) {
  __m256i t = _mm256_mul_epu32(a, b);
  __m256i m = _mm256_mul_epu32(t, l.ninv);
  __m256i mq = _mm256_mul_epu32(m, l.q);
  __m256i u = _mm256_srli_epi64(_mm256_add_epi64(t, mq), 32);
  __m256i ge = _mm256_cmpgt_epi64(l.q, u);  // q > u  -> keep u
  return _mm256_sub_epi64(u, _mm256_andnot_si256(ge, l.q));
}

inline __m256i add_mod(__m256i a, __m256i b, const Lanes& l) {
  __m256i s = _mm256_add_epi64(a, b);
  __m256i lt = _mm256_cmpgt_epi64(l.q, s);
  return _mm256_sub_epi64(s, _mm256_andnot_si256(lt, l.q));
}

inline int top_bit(std::uint64_t x) { return 63 - __builtin_clzll(x); }

void pow_mod4(const std::uint32_t* q, const std::uint32_t* ninv, const std::uint32_t* r2,
              std::uint32_t base, std::uint64_t exponent, std::uint32_t* out) {
  Lanes l{load4(q), load4(ninv), load4(r2)};
  const __m256i one = _mm256_set1_epi64x(1);
  __m256i x = mont_mul(_mm256_set1_epi64x(base), l.r2, l);  // base * R mod q
  __m256i acc = mont_mul(one, l.r2, l);                      // R mod q
  if (exponent) {
    for (int bit = top_bit(exponent); bit >= 0; --bit) {
      acc = mont_mul(acc, acc, l);
      if ((exponent >> bit) & 1) acc = mont_mul(acc, x, l);
    }
  }
  store4(out, mont_mul(acc, one, l));
}

void residue4(const std::uint32_t* q, const std::uint32_t* ninv, const std::uint32_t* r2,
              const std::uint32_t* limbs, std::size_t limb_count, std::uint32_t* out) {
  Lanes l{load4(q), load4(ninv), load4(r2)};
  __m256i acc = _mm256_setzero_si256();  // Montgomery form of the running value
  for (std::size_t j = 0; j < limb_count; ++j) {
    __m256i limb = _mm256_set1_epi64x(limbs[j]);
    acc = add_mod(mont_mul(acc, l.r2, l), mont_mul(limb, l.r2, l), l);
  }
  store4(out, mont_mul(acc, _mm256_set1_epi64x(1), l));
}

}  // namespace

// Callers hand over whole groups of four; the dispatcher finishes tails with
// the scalar path.
void pow_mod(const std::uint32_t* q, const std::uint32_t* neg_inv, const std::uint32_t* r2,
             std::size_t n, std::uint32_t base, std::uint64_t exponent, std::uint32_t* out) {
  for (std::size_t i = 0; i + 4 <= n; i += 4) {
    pow_mod4(q + i, neg_inv + i, r2 + i, base, exponent, out + i);
  }
}

void residue(const std::uint32_t* q, const std::uint32_t* neg_inv, const std::uint32_t* r2,
             std::size_t n, const std::uint32_t* limbs, std::size_t limb_count,
             std::uint32_t* out) {
  for (std::size_t i = 0; i + 4 <= n; i += 4) {
    residue4(q + i, neg_inv + i, r2 + i, limbs, limb_count, out + i);
  }
}

}  // namespace phistar::kernels::avx2
