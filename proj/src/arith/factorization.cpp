#include "phistar/factorization.hpp"

#include <algorithm>
#include <charconv>

#include "phistar/errors.hpp"
#include "phistar/primes.hpp"

namespace phistar {

Factorization::Factorization(std::vector<PrimeFactor> factors) : factors_(std::move(factors)) {
  canonicalize();
}

Factorization::Factorization(std::initializer_list<std::pair<std::uint64_t, unsigned>> factors) {
  for (const auto& [p, e] : factors) factors_.push_back({from_u64(p), e});
  canonicalize();
}

Factorization Factorization::from_u64_pairs(
    const std::vector<std::pair<std::uint64_t, unsigned>>& pairs) {
  std::vector<PrimeFactor> fs;
  fs.reserve(pairs.size());
  for (const auto& [p, e] : pairs) fs.push_back({from_u64(p), e});
  return Factorization(std::move(fs));
}

void Factorization::canonicalize() {
  for (const auto& f : factors_) {
    if (f.exponent == 0) throw DomainError("zero exponent in factorization");
    if (cmp(f.prime, 2) < 0) throw DomainError("factor below 2 in factorization");
  }
  std::sort(factors_.begin(), factors_.end(),
            [](const PrimeFactor& a, const PrimeFactor& b) { return cmp(a.prime, b.prime) < 0; });
  std::vector<PrimeFactor> merged;
  merged.reserve(factors_.size());
  for (auto& f : factors_) {
    if (!merged.empty() && merged.back().prime == f.prime) {
      merged.back().exponent += f.exponent;
    } else {
      merged.push_back(std::move(f));
    }
  }
  factors_ = std::move(merged);
}

Natural Factorization::value() const {
  Natural v = 1;
  for (const auto& f : factors_) v *= pow_natural(f.prime, f.exponent);
  return v;
}

unsigned Factorization::exponent_of(const Natural& p) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), p,
                             [](const PrimeFactor& f, const Natural& x) { return cmp(f.prime, x) < 0; });
  if (it != factors_.end() && it->prime == p) return it->exponent;
  return 0;
}

Natural Factorization::largest_prime() const {
  if (factors_.empty()) throw DomainError("largest prime of the empty factorization");
  return factors_.back().prime;
}

bool Factorization::is_squarefree() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimeFactor& f) { return f.exponent == 1; });
}

Factorization Factorization::odd_part() const {
  Factorization r;
  for (const auto& f : factors_) {
    if (f.prime != 2) r.factors_.push_back(f);
  }
  return r;
}

Factorization Factorization::operator*(const Factorization& other) const {
  Factorization r = *this;
  r *= other;
  return r;
}

Factorization& Factorization::operator*=(const Factorization& other) {
  factors_.insert(factors_.end(), other.factors_.begin(), other.factors_.end());
  canonicalize();
  return *this;
}

void Factorization::validate() const {
  for (const auto& f : factors_) {
    if (!is_prime(f.prime)) throw DomainError("non-prime factor " + f.prime.get_str());
  }
}

std::string Factorization::to_string() const {
  if (factors_.empty()) return "1";
  std::string s;
  for (const auto& f : factors_) {
    if (!s.empty()) s += '*';
    s += f.prime.get_str();
    if (f.exponent != 1) s += '^' + std::to_string(f.exponent);
  }
  return s;
}

std::string Factorization::to_explicit_string() const {
  std::string s;
  for (const auto& f : factors_) {
    if (!s.empty()) s += '*';
    s += f.prime.get_str() + '^' + std::to_string(f.exponent);
  }
  return s;
}

Factorization Factorization::parse(std::string_view text) {
  if (text == "1") return {};
  if (text.empty()) throw ParseError("empty factored integer");
  std::vector<PrimeFactor> fs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t star = text.find('*', pos);
    std::string_view term = text.substr(pos, star == std::string_view::npos ? text.npos : star - pos);
    if (term.empty()) throw ParseError("empty term in '" + std::string(text) + "'");
    std::size_t caret = term.find('^');
    PrimeFactor f;
    f.prime = parse_natural(term.substr(0, caret));
    if (caret != std::string_view::npos) {
      std::string_view ex = term.substr(caret + 1);
      unsigned e = 0;
      auto [ptr, ec] = std::from_chars(ex.data(), ex.data() + ex.size(), e);
      if (ec != std::errc{} || ptr != ex.data() + ex.size() || ex.empty()) {
        throw ParseError("bad exponent in '" + std::string(term) + "'");
      }
      f.exponent = e;
    }
    if (f.exponent == 0) throw ParseError("zero exponent in '" + std::string(term) + "'");
    if (cmp(f.prime, 2) < 0) throw ParseError("factor below 2 in '" + std::string(term) + "'");
    fs.push_back(std::move(f));
    if (star == std::string_view::npos) break;
    pos = star + 1;
  }
  return Factorization(std::move(fs));
}

std::vector<std::pair<std::uint64_t, unsigned>> Factorization::to_u64_pairs() const {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) {
    auto p = as_u64(f.prime);
    if (!p) throw DomainError("prime " + f.prime.get_str() + " exceeds 64 bits");
    out.emplace_back(*p, f.exponent);
  }
  return out;
}

}  // namespace phistar
