#include "phistar/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "phistar/errors.hpp"
#include "phistar/primes.hpp"
#include "phistar/smoothness.hpp"

namespace phistar {

namespace {

using u64 = std::uint64_t;
constexpr u64 kMaxBound = u64{1} << 31;

template <class... F>
struct Overload : F... {
  using F::operator()...;
};
template <class... F>
Overload(F...) -> Overload<F...>;

// Caches shared by every branch of one run.
class Shared {
 public:
  explicit Shared(const SearchConfig& cfg)
      : cfg(cfg), B(to_u64(cfg.prime_bound)), sieve(sieve_covering(B)) {
    for (u64 p : sieve->primes()) {
      if (p >= B) break;
      primes.push_back(p);
    }
  }

  const SearchConfig& cfg;
  const u64 B;
  std::shared_ptr<const PrimeSieve> sieve;
  std::vector<u64> primes;  // every prime < B

  // Admissible exponents of the odd prime p: p^a <= cap and P(p^a - 1) < B.
  const std::vector<unsigned>& exponents(u64 p) {
    std::lock_guard lock(mu_);
    auto it = support_.find(p);
    if (it != support_.end()) return it->second;
    std::vector<unsigned> v;
    for (u64 k : odd_exponent_support(from_u64(p), cfg.prime_bound, cfg.odd_power_cap))
      v.push_back(static_cast<unsigned>(k));
    return support_.emplace(p, std::move(v)).first->second;
  }

  // p^a - 1 for an admissible exponent; every prime is below B.
  const SmallFactorization& power_minus_one(u64 p, unsigned a) {
    {
      std::lock_guard lock(mu_);
      auto it = pm1_.find({p, a});
      if (it != pm1_.end()) return it->second;
    }
    SmallFactorization f;
    if (a == 1) {
      f = factorize_u64(p - 1);
    } else {
      auto v = is_shifted_smooth(from_u64(p), a, cfg.prime_bound);
      if (!v.smooth) throw std::logic_error("power_minus_one called on an inadmissible exponent");
      f = v.factors_found.to_u64_pairs();
    }
    std::lock_guard lock(mu_);
    return pm1_.emplace(std::make_pair(p, a), std::move(f)).first->second;
  }

 private:
  std::mutex mu_;
  std::unordered_map<u64, std::vector<unsigned>> support_;
  std::map<std::pair<u64, unsigned>, SmallFactorization> pm1_;
};

struct Node {
  std::vector<std::pair<u64, unsigned>> present;  // decided odd primes, ascending
  std::vector<u64> required;                      // undecided, ascending, all >= frontier
  std::map<u64, unsigned> demand;
  u64 frontier = 3;
  ExactRational h = 1;  // h(2^e * present)
  std::vector<std::string> trail;

  const unsigned* exponent_of(u64 p) const {
    auto it = std::lower_bound(present.begin(), present.end(), std::make_pair(p, 0u));
    return it != present.end() && it->first == p ? &it->second : nullptr;
  }
  bool is_required(u64 p) const { return std::binary_search(required.begin(), required.end(), p); }
};

class Branch {
 public:
  Branch(Shared& shared, unsigned e) : sh_(shared), cfg_(shared.cfg), e_(e) {}

  BranchResult run();

  // Shared with prune(): closure rounds then the demand tests.
  std::optional<Contradiction> settle(Node& node, std::vector<u64> fresh) const;
  bool window_ok(const Node& node) const;
  std::vector<u64> add_demand(Node& node, const SmallFactorization& f) const;

 private:
  std::optional<Contradiction> check(const Node& node) const;
  void dfs(Node& node, unsigned depth);
  std::vector<u64> free_candidates(const Node& node) const;
  void leaf(const Contradiction& c, unsigned depth, const Node& node);
  std::size_t omega(const Node& n) const { return (e_ >= 1 ? 1 : 0) + n.present.size() + n.required.size(); }

  // log of the largest product of p/(p-1) over t distinct primes >= from, not in R.
  double log_free_product(const Node& node, u64 from, unsigned t) const;
  ExactRational free_product(const Node& node, u64 from, unsigned t) const;
  double log_required_product(const Node& node) const;
  ExactRational required_product(const Node& node) const;
  bool target_allowed(const Natural& H) const;
  unsigned two_room(const Node& node) const;
  unsigned free_room(const Node& node) const;

  Shared& sh_;
  const SearchConfig& cfg_;
  unsigned e_;
  BranchResult result_;
  std::map<std::string, std::uint64_t> histogram_;
};

std::vector<u64> Branch::add_demand(Node& node, const SmallFactorization& f) const {
  std::vector<u64> fresh;
  for (auto [s, v] : f) {
    node.demand[s] += v;
    if (s == 2 || s < node.frontier || node.exponent_of(s) || node.is_required(s)) continue;
    node.required.insert(std::lower_bound(node.required.begin(), node.required.end(), s), s);
    fresh.push_back(s);
  }
  return fresh;
}

std::optional<Contradiction> Branch::check(const Node& node) const {
  for (auto [s, d] : node.demand) {
    if (s == 2) {
      if (d > e_) return ForcedExceedsUnitary{2, d, e_};
      continue;
    }
    if (s >= sh_.B) return ForcedPowerExceedsCap{from_u64(s), d};
    if (const unsigned* a = node.exponent_of(s)) {
      if (d > *a) return ForcedExceedsUnitary{from_u64(s), d, *a};
    } else if (s < node.frontier) {
      return ForcedExceedsUnitary{from_u64(s), d, 0};
    } else {
      const auto& ex = sh_.exponents(s);
      if (ex.empty() || ex.back() < d) return ForcedPowerExceedsCap{from_u64(s), d};
    }
  }
  if (cfg_.omega_cap && omega(node) > *cfg_.omega_cap) return NoCandidatePrime{};
  return std::nullopt;
}

// Each round adds r - 1 for the primes that became required in the previous
// round; the tests run after every round, so the reported contradiction is
// the one visible at the shallowest closure level.
std::optional<Contradiction> Branch::settle(Node& node, std::vector<u64> fresh) const {
  for (;;) {
    if (auto c = check(node)) return c;
    if (fresh.empty()) return std::nullopt;
    std::vector<u64> next;
    for (u64 r : fresh) {
      if (r >= sh_.B) continue;
      auto more = add_demand(node, factorize_u64(r - 1));
      next.insert(next.end(), more.begin(), more.end());
    }
    fresh = std::move(next);
  }
}

double Branch::log_free_product(const Node& node, u64 from, unsigned t) const {
  double s = 0;
  auto it = std::lower_bound(sh_.primes.begin(), sh_.primes.end(), std::max<u64>(from, 3));
  for (; t > 0 && it != sh_.primes.end(); ++it) {
    if (node.is_required(*it)) continue;
    const double p = static_cast<double>(*it);
    s += std::log(p / (p - 1));
    --t;
  }
  return s;
}

ExactRational Branch::free_product(const Node& node, u64 from, unsigned t) const {
  ExactRational q = 1;
  auto it = std::lower_bound(sh_.primes.begin(), sh_.primes.end(), std::max<u64>(from, 3));
  for (; t > 0 && it != sh_.primes.end(); ++it) {
    if (node.is_required(*it)) continue;
    q *= make_rational(from_u64(*it), from_u64(*it - 1));
    --t;
  }
  return q;
}

double Branch::log_required_product(const Node& node) const {
  double s = 0;
  for (u64 r : node.required) s += std::log(static_cast<double>(r) / static_cast<double>(r - 1));
  return s;
}

ExactRational Branch::required_product(const Node& node) const {
  ExactRational q = 1;
  for (u64 r : node.required) q *= make_rational(from_u64(r), from_u64(r - 1));
  return q;
}

bool Branch::target_allowed(const Natural& H) const {
  if (!cfg_.h_targets) return true;
  return std::find(cfg_.h_targets->begin(), cfg_.h_targets->end(), H) != cfg_.h_targets->end();
}

// Factors of 2 in N not yet claimed by the demand ledger.
unsigned Branch::two_room(const Node& node) const {
  auto it = node.demand.find(2);
  const unsigned used = it == node.demand.end() ? 0 : it->second;
  return e_ >= used ? e_ - used : 0;
}

// Upper bound on how many more odd primes (beyond present and required) N can have.
unsigned Branch::free_room(const Node& node) const {
  unsigned room = two_room(node);
  if (cfg_.omega_cap) {
    const std::size_t w = omega(node);
    room = std::min<unsigned>(room, w >= *cfg_.omega_cap ? 0 : static_cast<unsigned>(*cfg_.omega_cap - w));
  }
  return room;
}

// Some admissible integer H must satisfy h(M) <= H <= h(M) * prod_R r/(r-1) * F(t_H),
// where each extra odd prime costs at least one factor 2 so t_H <= room - v2(H).
bool Branch::window_ok(const Node& node) const {
  const unsigned room = free_room(node);
  const unsigned two = two_room(node);
  const double log_h = std::log(node.h.get_d());
  const double log_r = log_required_product(node);
  const double log_max = log_h + log_r + log_free_product(node, node.frontier, room);
  const bool strict = !node.required.empty();  // h(N) > h(M) once anything is added
  Natural H = node.h.get_num() / node.h.get_den();
  if (strict || !is_integral(node.h)) H += 1;
  const double eps = 1e-9;
  for (; std::log(H.get_d()) <= log_max + eps; ++H) {
    if (!target_allowed(H)) continue;
    if (!strict && ExactRational(H) == node.h) return true;  // N = M itself
    const unsigned v2 = valuation(H, 2);
    if (v2 > two) continue;
    const unsigned t = std::min(room, two - v2);
    const double lhs = std::log(H.get_d());
    const double rhs = log_h + log_r + log_free_product(node, node.frontier, t);
    if (lhs < rhs - eps) return true;
    if (lhs > rhs + eps) continue;
    if (ExactRational(H) <= node.h * required_product(node) * free_product(node, node.frontier, t)) return true;
  }
  return false;
}

// Free primes p in [frontier, min R) with p - 1 | slack (the part of N not yet
// consumed by the demand ledger), ascending.
std::vector<u64> Branch::free_candidates(const Node& node) const {
  const u64 limit = node.required.empty() ? sh_.B : node.required.front();
  if (node.frontier >= limit) return {};
  std::vector<std::pair<u64, unsigned>> slack;
  auto used = [&](u64 s) {
    auto it = node.demand.find(s);
    return it == node.demand.end() ? 0u : it->second;
  };
  if (e_ > used(2)) slack.emplace_back(2, e_ - used(2));
  for (auto [p, a] : node.present)
    if (a > used(p)) slack.emplace_back(p, a - used(p));
  if (slack.empty() || slack.front().first != 2) return {};  // p - 1 is even

  auto divides_slack = [&](u64 m) {
    for (auto [s, v] : slack) {
      for (unsigned i = 0; i < v && m % s == 0; ++i) m /= s;
      if (m == 1) return true;
    }
    return m == 1;
  };

  auto lo = std::lower_bound(sh_.primes.begin(), sh_.primes.end(), node.frontier);
  auto hi = std::lower_bound(lo, sh_.primes.end(), limit);
  if (cfg_.initial_segment_support) {
    if (lo == hi || !divides_slack(*lo - 1)) return {};
    return {*lo};
  }

  long double divisors = 1;
  for (auto [s, v] : slack) divisors *= (v + 1);
  std::vector<u64> out;
  if (divisors <= static_cast<long double>(hi - lo)) {
    std::vector<u64> ds{1};
    for (auto [s, v] : slack) {
      const std::size_t n = ds.size();
      for (std::size_t i = 0; i < n; ++i) {
        u64 d = ds[i];
        for (unsigned j = 0; j < v; ++j) {
          if (d > (limit - 1) / s) break;
          d *= s;
          ds.push_back(d);
        }
      }
    }
    for (u64 d : ds) {
      const u64 p = d + 1;
      if (p >= node.frontier && p < limit && p > 2 && sh_.sieve->is_prime(p)) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
  } else {
    for (auto it = lo; it != hi; ++it)
      if (divides_slack(*it - 1)) out.push_back(*it);
  }
  return out;
}

void Branch::leaf(const Contradiction& c, unsigned depth, const Node& node) {
  ++histogram_[contradiction_kind(c)];
  if (!result_.certificate) result_.certificate = EliminationCertificate{e_, c, depth, node.trail, {}, 0};
}

void Branch::dfs(Node& node, unsigned depth) {
  ++result_.nodes;
  if (node.required.empty() && is_integral(node.h) && target_allowed(node.h.get_num())) {
    std::vector<PrimeFactor> fs;
    if (e_ >= 1) fs.push_back({2, e_});
    for (auto [p, a] : node.present) fs.push_back({from_u64(p), a});
    auto rec = is_solution(Factorization(std::move(fs)), SolutionSource::SearchDiscovered);
    if (!rec) throw std::logic_error("search emitted a non-solution");
    result_.solutions.push_back(std::move(*rec));
  }

  // Children: the next odd prime of N is a free prime below min R, or min R itself.
  std::vector<std::pair<u64, bool>> next;
  const unsigned room = free_room(node);
  if (room > 0) {
    const double log_base = std::log(node.h.get_d()) + log_required_product(node);
    const double log_floor = std::log(std::floor(node.h.get_d()) + 1) - 1e-9;
    for (u64 p : free_candidates(node)) {
      // Adding p caps h(N) by products over primes >= p only; this shrinks as p grows.
      if (!cfg_.h_targets && log_base + log_free_product(node, p, room) < log_floor) break;
      next.emplace_back(p, false);
    }
  }
  if (!node.required.empty()) {
    const u64 r = node.required.front();
    const bool gap = cfg_.initial_segment_support &&
                     *std::lower_bound(sh_.primes.begin(), sh_.primes.end(), node.frontier) != r;
    if (!gap) next.emplace_back(r, true);
  }
  if (next.empty() && !(node.required.empty() && is_integral(node.h))) {
    leaf(NoCandidatePrime{}, depth, node);
    return;
  }

  for (auto [p, was_required] : next) {
    const auto d_it = node.demand.find(p);
    const unsigned need = std::max(1u, d_it == node.demand.end() ? 0u : d_it->second);
    for (unsigned a : sh_.exponents(p)) {
      if (a < need) continue;
      Node child = node;
      child.frontier = p + 1;
      if (was_required) {
        child.required.erase(std::lower_bound(child.required.begin(), child.required.end(), p));
        for (auto [s, v] : factorize_u64(p - 1)) {
          auto it = child.demand.find(s);
          if ((it->second -= v) == 0) child.demand.erase(it);
        }
      }
      child.present.emplace_back(p, a);
      const Natural pa = pow_natural(p, a);
      child.h *= make_rational(pa, pa - 1);
      child.trail.push_back(PrimePower{from_u64(p), a}.to_string());
      auto fresh = add_demand(child, sh_.power_minus_one(p, a));
      if (auto c = settle(child, std::move(fresh))) {
        ++result_.nodes;
        leaf(*c, depth + 1, child);
        continue;
      }
      if (!window_ok(child)) {
        ++result_.nodes;
        leaf(HOutOfRange{}, depth + 1, child);
        continue;
      }
      dfs(child, depth + 1);
    }
  }
}

BranchResult Branch::run() {
  const auto t0 = std::chrono::steady_clock::now();
  result_.two_exponent = e_;
  Node root;
  if (e_ >= 1) root.h = make_rational(pow_natural(2, e_), pow_natural(2, e_) - 1);
  root.trail.push_back(e_ == 1 ? "2" : "2^" + std::to_string(e_));

  std::optional<Contradiction> root_failure;
  std::vector<u64> fresh;
  if (e_ >= 2) {
    auto v = is_shifted_smooth(2, e_, cfg_.prime_bound);
    fresh = add_demand(root, v.factors_found.to_u64_pairs());
    if (auto c = check(root)) {
      root_failure = c;
    } else if (v.residual > 1) {
      // Every prime of the residual is >= B.
      auto part = try_factorize(v.residual, cfg_.effort, cfg_.cache);
      if (!part.found.empty()) {
        const auto& q = part.found.factors().front();
        root_failure = ForcedPowerExceedsCap{q.prime, q.exponent};
      } else {
        root_failure = Undecidable{part.unfactored.value_or(v.residual)};
      }
    }
  }
  if (!root_failure) root_failure = settle(root, std::move(fresh));
  if (!root_failure && !window_ok(root)) root_failure = HOutOfRange{};

  if (root_failure) {
    ++result_.nodes;
    leaf(*root_failure, 0, root);
  } else {
    dfs(root, 0);
  }

  std::sort(result_.solutions.begin(), result_.solutions.end(),
            [](const SolutionRecord& x, const SolutionRecord& y) { return cmp(x.value(), y.value()) < 0; });
  if (result_.certificate) {
    result_.certificate->histogram = histogram_;
    result_.certificate->nodes = result_.nodes;
  }
  if (!result_.solutions.empty()) {
    result_.outcome = BranchOutcome::Solution;
  } else if (histogram_.count("Undecidable")) {
    result_.outcome = BranchOutcome::Undecidable;
  } else {
    result_.outcome = BranchOutcome::Eliminated;
  }
  result_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result_;
}

std::vector<unsigned> exponent_set(const SearchConfig& config) {
  std::set<unsigned> es(config.two_exponent_set.begin(), config.two_exponent_set.end());
  if (es.empty())
    for (u64 k : smooth_exponents_base2(config.prime_bound)) es.insert(static_cast<unsigned>(k));
  es.insert(0);
  return {es.begin(), es.end()};
}

}  // namespace

void SearchConfig::validate() const {
  if (cmp(prime_bound, 3) < 0) throw DomainError("prime bound must be >= 3");
  if (cmp(prime_bound, kMaxBound) > 0) throw DomainError("prime bound must be <= 2^31");
  if (cmp(odd_power_cap, prime_bound) < 0) throw DomainError("odd power cap must be >= the prime bound");
  if (parallel_width == 0) throw DomainError("parallel width must be positive");
  if (omega_cap && *omega_cap == 0) throw DomainError("omega cap must be positive");
  if (h_targets) {
    if (h_targets->empty()) throw DomainError("h target list is empty");
    for (const auto& h : *h_targets)
      if (sgn(h) <= 0) throw DomainError("h targets must be positive");
  }
}

std::string contradiction_kind(const Contradiction& c) {
  static constexpr const char* kNames[] = {"ForcedPowerExceedsCap", "ForcedExceedsUnitary", "NoCandidatePrime",
                                           "HOutOfRange", "Undecidable"};
  return kNames[c.index()];
}

std::string to_string(const Contradiction& c) {
  return std::visit(Overload{
                        [](const ForcedPowerExceedsCap& x) {
                          return "ForcedPowerExceedsCap(" + to_decimal(x.prime) + ", " +
                                 std::to_string(x.needed_exponent) + ")";
                        },
                        [](const ForcedExceedsUnitary& x) {
                          return "ForcedExceedsUnitary(" + to_decimal(x.prime) + ")";
                        },
                        [](const NoCandidatePrime&) { return std::string("NoCandidatePrime"); },
                        [](const HOutOfRange&) { return std::string("HOutOfRange"); },
                        [](const Undecidable& x) { return "Undecidable(" + to_decimal(x.cofactor) + ")"; },
                    },
                    c);
}

std::string_view outcome_name(BranchOutcome o) {
  switch (o) {
    case BranchOutcome::Solution: return "solution";
    case BranchOutcome::Eliminated: return "eliminated";
    case BranchOutcome::Undecidable: return "undecidable";
  }
  return "?";
}

Factorization SearchState::decided_part() const {
  std::vector<PrimeFactor> fs;
  if (two_exponent >= 1) fs.push_back({2, two_exponent});
  for (auto [p, a] : assigned)
    if (a > 0) fs.push_back({from_u64(p), a});
  return Factorization(std::move(fs));
}

SearchState state_from(const Factorization& m) {
  SearchState s;
  for (const auto& f : m) {
    if (f.prime == 2) {
      s.two_exponent = f.exponent;
    } else {
      if (!fits_u64(f.prime)) throw DomainError("state primes must fit in 64 bits");
      s.assigned[to_u64(f.prime)] = f.exponent;
      s.frontier = to_u64(f.prime) + 1;
    }
    s.trail.push_back(PrimePower{f.prime, f.exponent}.to_string());
  }
  return s;
}

PruneVerdict prune(SearchState& state, const SearchConfig& config) {
  config.validate();
  Shared shared(config);
  Branch branch(shared, state.two_exponent);
  auto reject = [](Contradiction c) { return PruneVerdict{false, std::move(c)}; };

  Node node;
  node.frontier = std::max<u64>(state.frontier, 3);
  node.trail = state.trail;
  if (state.two_exponent >= 1)
    node.h = make_rational(pow_natural(2, state.two_exponent), pow_natural(2, state.two_exponent) - 1);
  for (auto [p, a] : state.assigned) {
    if (a == 0) {
      node.required.push_back(p);
    } else {
      node.present.emplace_back(p, a);
      const Natural pa = pow_natural(p, a);
      node.h *= make_rational(pa, pa - 1);
    }
  }

  const std::vector<u64> given_required = node.required;
  std::vector<u64> fresh;
  try {
    auto more = [&](const Factorization& f) {
      for (const auto& pf : f)
        if (!fits_u64(pf.prime)) throw ForcedPowerExceedsCap{pf.prime, pf.exponent};
      auto v = branch.add_demand(node, f.to_u64_pairs());
      fresh.insert(fresh.end(), v.begin(), v.end());
    };
    if (state.two_exponent >= 2) more(factorize_power_minus_one(2, state.two_exponent, config.effort, config.cache));
    for (auto [p, a] : node.present) {
      if (cmp(pow_natural(p, a), config.odd_power_cap) > 0) return reject(ForcedPowerExceedsCap{from_u64(p), a});
      more(factorize_power_minus_one(from_u64(p), a, config.effort, config.cache));
    }
    for (u64 r : given_required) {
      auto v = branch.add_demand(node, factorize_u64(r - 1));
      fresh.insert(fresh.end(), v.begin(), v.end());
    }
  } catch (const EffortExceeded& ex) {
    return reject(Undecidable{ex.cofactor()});
  } catch (const ForcedPowerExceedsCap& c) {
    return reject(c);
  }

  PruneVerdict verdict;
  if (auto c = branch.settle(node, std::move(fresh))) {
    verdict = reject(*c);
  } else if (!branch.window_ok(node)) {
    verdict = reject(HOutOfRange{});
  }
  for (u64 r : node.required) state.assigned.emplace(r, 0);
  state.forced_multiplicity = node.demand;
  return verdict;
}

BranchResult close_and_check(unsigned e, const SearchConfig& config) {
  config.validate();
  if (!config.two_exponent_set.empty() && e != 0 &&
      std::find(config.two_exponent_set.begin(), config.two_exponent_set.end(), e) == config.two_exponent_set.end())
    throw DomainError("exponent " + std::to_string(e) + " is not in the configured set");
  Shared shared(config);
  return Branch(shared, e).run();
}

SearchResult enumerate_solutions(const SearchConfig& config,
                                 const std::function<void(const BranchResult&)>& on_branch) {
  config.validate();
  const auto exps = exponent_set(config);
  Shared shared(config);
  std::vector<BranchResult> results(exps.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  std::exception_ptr failure;

  auto worker = [&] {
    for (std::size_t i; (i = next++) < exps.size();) {
      try {
        results[i] = Branch(shared, exps[i]).run();
        if (on_branch) {
          std::lock_guard lock(report);
          on_branch(results[i]);
        }
      } catch (...) {
        std::lock_guard lock(report);
        if (!failure) failure = std::current_exception();
        next = exps.size();
      }
    }
  };
  const unsigned width = std::min<std::size_t>(config.parallel_width, exps.size());
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < width; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SearchResult out;
  out.branches = std::move(results);
  for (const auto& b : out.branches)
    out.solutions.insert(out.solutions.end(), b.solutions.begin(), b.solutions.end());
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const SolutionRecord& x, const SolutionRecord& y) { return cmp(x.value(), y.value()) < 0; });
  return out;
}

}  // namespace phistar
