#include "phistar/natural.hpp"

#include <cctype>

#include "phistar/errors.hpp"

namespace phistar {

Natural parse_natural(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("not a non-negative decimal integer: '" + std::string(text) + "'");
    }
  }
  Natural n;
  n.set_str(std::string(text), 10);
  return n;
}

std::string to_decimal(const Natural& n) { return n.get_str(10); }

Natural from_u64(std::uint64_t v) {
  Natural n;
  mpz_import(n.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return n;
}

bool fits_u64(const Natural& n) { return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const Natural& n) {
  std::uint64_t v = 0;
  if (sgn(n) == 0) return 0;
  if (!fits_u64(n)) throw DomainError("value does not fit in 64 bits");
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, n.get_mpz_t());
  return v;
}

std::optional<std::uint64_t> as_u64(const Natural& n) {
  if (!fits_u64(n)) return std::nullopt;
  return to_u64(n);
}

Natural pow_natural(const Natural& base, unsigned long exponent) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Natural pow_natural(std::uint64_t base, unsigned long exponent) {
  return pow_natural(from_u64(base), exponent);
}

unsigned valuation(const Natural& n, const Natural& p) {
  if (sgn(n) == 0) throw DomainError("valuation of zero");
  if (cmp(p, 2) < 0) throw DomainError("valuation base must be >= 2");
  Natural rest = n;
  unsigned v = 0;
  while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

unsigned valuation_u64(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw DomainError("valuation of zero");
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

ExactRational make_rational(const Natural& num, const Natural& den) {
  if (sgn(den) == 0) throw DomainError("zero denominator");
  ExactRational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const ExactRational& q) {
  if (is_integral(q)) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool is_integral(const ExactRational& q) { return cmp(q.get_den(), 1) == 0; }

}  // namespace phistar
