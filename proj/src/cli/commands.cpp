#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "phistar/arrow.hpp"
#include "phistar/cli.hpp"
#include "phistar/errors.hpp"
#include "phistar/factor_cache.hpp"
#include "phistar/factorize.hpp"
#include "phistar/search.hpp"
#include "phistar/smoothness.hpp"
#include "phistar/totient.hpp"

#ifndef PHISTAR_VERSION
#define PHISTAR_VERSION "0.0.0"
#endif

namespace phistar::cli {

namespace {

constexpr const char* kCacheEnv = "PHISTAR_CACHE";
constexpr const char* kDefaultCache = ".phistar/factors.txt";

std::string dec(const Natural& n) { return to_decimal(n); }

Natural number_arg(const std::string& text) { return parse_product(text).value(); }

Json contradiction_json(const Contradiction& c) {
  Json j;
  j["kind"] = contradiction_kind(c);
  j["text"] = to_string(c);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ForcedPowerExceedsCap>) {
          j["prime"] = dec(x.prime);
          j["needed_exponent"] = x.needed_exponent;
        } else if constexpr (std::is_same_v<T, ForcedExceedsUnitary>) {
          j["prime"] = dec(x.prime);
          j["demanded"] = x.demanded;
          j["allowed"] = x.allowed;
        } else if constexpr (std::is_same_v<T, Undecidable>) {
          j["cofactor"] = dec(x.cofactor);
        }
      },
      c);
  return j;
}

Json branch_json(const BranchResult& b) {
  Json data;
  Json sols = Json::array(), vals = Json::array(), hs = Json::array();
  for (const auto& s : b.solutions) {
    sols.push_back(s.n.to_string());
    vals.push_back(dec(s.value()));
    hs.push_back(to_string(s.h));
  }
  data["solutions"] = sols;
  data["values"] = vals;
  data["h"] = hs;
  data["nodes"] = b.nodes;
  Json leaves = Json::object();
  if (b.certificate)
    for (const auto& [k, v] : b.certificate->histogram) leaves[k] = v;
  data["leaves"] = leaves;
  if (b.outcome != BranchOutcome::Solution && b.certificate) {
    Json cert = contradiction_json(b.certificate->contradiction);
    cert["depth"] = b.certificate->depth;
    cert["trail"] = b.certificate->trail;
    data["certificate"] = cert;
  }
  Json j;
  j["e"] = b.two_exponent;
  j["outcome"] = std::string(outcome_name(b.outcome));
  j["data"] = data;
  return j;
}

struct Globals {
  std::string format = "text";
  bool no_cache = false;
  std::string cache_path;
  std::string manifest;
  std::uint64_t trial_limit = Effort{}.trial_limit;
  std::uint64_t rho_iterations = Effort{}.rho_iterations;
  std::uint64_t pm1_bound = Effort{}.pm1_bound;
  bool log = false;

  Effort effort() const { return Effort{trial_limit, pm1_bound, rho_iterations}; }
  Format fmt() const { return format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Text; }
  std::string resolved_cache() const {
    if (!cache_path.empty()) return cache_path;
    if (const char* env = std::getenv(kCacheEnv); env && *env) return env;
    return kDefaultCache;
  }
};

// One parsed invocation.
class Run {
 public:
  Run(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), emit_(g.fmt(), out), err_(err) {
    if (!g.no_cache) cache_ = std::make_unique<FactorCache>(g.resolved_cache());
  }

  FactorCache* cache() { return cache_.get(); }
  Emitter& emit() { return emit_; }
  std::ostream& err() { return err_; }
  Json config = Json::object();

  Factorization number(const std::string& text) { return parse_product(text, g_.effort(), cache()); }

  void write_manifest(const std::string& command, double seconds) {
    if (g_.manifest.empty()) return;
    Json m;
    m["command"] = command;
    m["config"] = config;
    m["tool_version"] = PHISTAR_VERSION;
    m["cache_path"] = cache_ ? Json(g_.resolved_cache()) : Json(nullptr);
    m["wall_seconds"] = seconds;
    m["digest"] = sha256_hex(emit_.canonical());
    std::ofstream f(g_.manifest);
    if (!f) throw std::runtime_error("cannot write manifest " + g_.manifest);
    f << m.dump(2) << "\n";
  }

 private:
  const Globals& g_;
  Emitter emit_;
  std::ostream& err_;
  std::unique_ptr<FactorCache> cache_;
};

Json number_json(const Factorization& f) {
  Json j;
  j["n"] = dec(f.value());
  j["factorization"] = f.to_string();
  return j;
}

int cmd_phistar(Run& run, const std::string& n) {
  auto f = run.number(n);
  Json j = number_json(f);
  j["phi_star"] = dec(phi_star(f));
  run.emit().record(j);
  return kOk;
}

int cmd_h(Run& run, const std::string& n) {
  auto f = run.number(n);
  if (f.empty() && cmp(f.value(), 1) != 0) throw DomainError("h needs n >= 1");
  const auto h = h_ratio(f);
  Json j = number_json(f);
  j["h"] = to_string(h);
  j["integral"] = is_integral(h);
  run.emit().record(j);
  return kOk;
}

int cmd_verify(Run& run, const std::string& n) {
  auto f = run.number(n);
  auto rec = is_solution(f);
  Json j = number_json(f);
  j["phi_star"] = dec(phi_star(f));
  j["h"] = to_string(h_ratio(f));
  j["outcome"] = rec ? "solution" : "non-solution";
  run.emit().record(j);
  return rec ? kOk : kNegative;
}

int cmd_known(Run& run) {
  int i = 0;
  for (const auto& s : known_solutions()) {
    Json j;
    j["index"] = ++i;
    j["n"] = dec(s.value());
    j["factorization"] = s.n.to_string();
    j["phi_star"] = dec(phi_star(s.n));
    j["h"] = to_string(s.h);
    j["omega"] = s.n.omega();
    j["source"] = std::string(source_name(s.source));
    run.emit().record(j);
  }
  return kOk;
}

int cmd_exponents(Run& run, const std::string& bound_text, bool progress) {
  const Natural B = number_arg(bound_text);
  run.config["bound"] = dec(B);
  std::function<void(std::uint64_t, std::uint64_t)> cb;
  if (progress)
    cb = [&](std::uint64_t k, std::uint64_t kmax) { run.err() << "exponents: k=" << k << "/" << kmax << "\n"; };
  auto ks = smooth_exponents_base2(B, cb);
  Json j;
  j["bound"] = dec(B);
  if (cmp(B, 100) >= 0) j["k_max"] = exponent_cutoff(B).k_max;
  j["count"] = ks.size();
  j["exponents"] = ks;
  run.emit().record(j);
  return kOk;
}

int cmd_table(Run& run, unsigned k, const std::string& bound_text, const std::string& pbound_text,
              const std::string& two, const std::string& checkpoint) {
  const Natural B = number_arg(bound_text);
  const Natural P = pbound_text.empty() ? B : number_arg(pbound_text);
  TableOptions opt;
  opt.two = two == "always" ? TwoPolicy::Always : two == "never" ? TwoPolicy::Never : TwoPolicy::OddExponentsOnly;
  if (!checkpoint.empty()) opt.checkpoint = checkpoint;
  run.config["k"] = k;
  run.config["bound"] = dec(B);
  run.config["pbound"] = dec(P);
  run.config["two"] = two;
  auto ps = smooth_prime_powers(P, B, k, opt);
  Json j;
  j["k"] = k;
  j["bound"] = dec(B);
  j["pbound"] = dec(P);
  j["count"] = ps.size();
  Json arr = Json::array();
  for (const auto& p : ps) arr.push_back(dec(p));
  j["primes"] = arr;
  run.emit().record(j);
  return kOk;
}

int cmd_arrow(Run& run, const std::string& text, unsigned depth, const std::vector<std::string>& unitary,
              const Effort& effort) {
  if (text.find("->") != std::string::npos) {
    // A chain such as "5^7->19531->3^2".
    std::vector<std::string> parts;
    std::size_t at = 0;
    for (std::size_t pos; (pos = text.find("->", at)) != std::string::npos; at = pos + 2)
      parts.push_back(text.substr(at, pos - at));
    parts.push_back(text.substr(at));
    if (parts.size() < 2) throw ParseError("a chain needs a start and a target");
    ArrowChain chain{PrimePower::parse(parts.front()), {}, PrimePower::parse(parts.back())};
    for (std::size_t i = 1; i + 1 < parts.size(); ++i) chain.steps.push_back(parse_product(parts[i]).value());
    const std::string failure = check_chain(chain);
    Json j;
    j["chain"] = chain.to_string();
    j["outcome"] = failure.empty() ? "valid" : "invalid";
    j["reason"] = failure;
    run.emit().record(j);
    return failure.empty() ? kOk : kNegative;
  }
  ArrowOptions opt;
  opt.depth = depth;
  opt.effort = effort;
  opt.cache = run.cache();
  for (const auto& u : unitary) {
    auto pp = PrimePower::parse(u);
    opt.unitary[pp.p] = pp.e;
  }
  const auto seed = PrimePower::parse(text);
  run.config["seed"] = seed.to_string();
  run.config["depth"] = depth;
  auto c = arrow_closure(seed, opt);
  Json j;
  j["seed"] = seed.to_string();
  j["depth"] = depth;
  Json forced = Json::array();
  for (const auto& pp : c.forced) forced.push_back(pp.to_string());
  j["forced"] = forced;
  if (c.contradiction) {
    j["contradiction"] = {{"prime", dec(c.contradiction->prime)},
                          {"demanded", c.contradiction->demanded},
                          {"allowed", c.contradiction->allowed}};
  } else {
    j["contradiction"] = nullptr;
  }
  run.emit().record(j);
  return kOk;
}

int cmd_candidates(Run& run, const std::string& m_text, const std::string& h_text, unsigned r) {
  auto m = run.number(m_text);
  ExactRational h(parse_natural(h_text));
  unsigned k = 0;
  for (const auto& pf : m)
    if (pf.prime != 2) ++k;
  if (r == 0) r = k + 1;
  run.config["m"] = m.to_string();
  run.config["h"] = h_text;
  run.config["r"] = r;
  auto cs = next_prime_candidates(m, h, r);
  Json j;
  j["m"] = m.to_string();
  j["h"] = to_string(h);
  j["r"] = r;
  Json arr = Json::array();
  for (const auto& p : cs) arr.push_back(dec(p));
  j["candidates"] = arr;
  run.emit().record(j);
  return kOk;
}

struct SearchArgs {
  std::string bound;
  std::string cap;
  unsigned omega = 0;
  unsigned jobs = 1;
  std::vector<std::string> h_targets;
  std::vector<unsigned> exponents;
  bool initial_segment = false;
};

SearchConfig make_config(Run& run, const SearchArgs& a, const Effort& effort, bool cap_is_default_bound) {
  SearchConfig c;
  if (cap_is_default_bound && a.bound.empty() && !a.cap.empty()) {
    c.odd_power_cap = number_arg(a.cap);
    c.prime_bound = c.odd_power_cap;
  } else {
    c.prime_bound = a.bound.empty() ? Natural(100) : number_arg(a.bound);
    c.odd_power_cap = a.cap.empty() ? Natural(c.prime_bound * c.prime_bound) : number_arg(a.cap);
  }
  if (a.omega) c.omega_cap = a.omega;
  if (!a.h_targets.empty()) {
    std::vector<Natural> hs;
    for (const auto& h : a.h_targets) hs.push_back(number_arg(h));
    c.h_targets = hs;
  }
  c.two_exponent_set = a.exponents;
  c.parallel_width = std::max(1u, a.jobs);
  c.initial_segment_support = a.initial_segment;
  c.effort = effort;
  c.cache = run.cache();
  c.validate();

  run.config["bound"] = dec(c.prime_bound);
  run.config["cap"] = dec(c.odd_power_cap);
  run.config["omega"] = c.omega_cap ? Json(*c.omega_cap) : Json(nullptr);
  Json hs = Json::array();
  if (c.h_targets)
    for (const auto& h : *c.h_targets) hs.push_back(dec(h));
  run.config["h_targets"] = hs;
  run.config["jobs"] = c.parallel_width;
  run.config["initial_segment"] = c.initial_segment_support;
  // The base-2 exponent list for this bound.
  run.config["two_exponent_source"] = a.exponents.empty() ? "smooth_exponents_base2(bound)" : "explicit";
  return c;
}

void log_branch(Run& run, bool on, const BranchResult& b) {
  if (!on) return;
  run.err() << "e=" << b.two_exponent << " " << outcome_name(b.outcome) << " nodes=" << b.nodes
            << " seconds=" << b.seconds;
  if (b.certificate && b.outcome != BranchOutcome::Solution) run.err() << " " << to_string(b.certificate->contradiction);
  run.err() << "\n";
}

int cmd_search(Run& run, SearchArgs a, const Effort& effort, bool log) {
  SearchConfig c = make_config(run, a, effort, false);
  if (c.two_exponent_set.empty())
    for (auto k : smooth_exponents_base2(c.prime_bound)) c.two_exponent_set.push_back(static_cast<unsigned>(k));
  std::set<unsigned> order(c.two_exponent_set.begin(), c.two_exponent_set.end());
  order.insert(0);
  run.config["exponents"] = std::vector<unsigned>(order.begin(), order.end());

  // Branches finish in any order; records go out in increasing e.
  std::map<unsigned, Json> ready;
  auto next = order.begin();
  auto on_branch = [&](const BranchResult& b) {
    log_branch(run, log, b);
    ready.emplace(b.two_exponent, branch_json(b));
    while (next != order.end() && ready.count(*next)) {
      run.emit().record(ready[*next]);
      ready.erase(*next);
      ++next;
    }
  };
  enumerate_solutions(c, on_branch);
  return kOk;
}

int cmd_close(Run& run, unsigned e, const SearchArgs& a, const Effort& effort, bool log) {
  SearchConfig c = make_config(run, a, effort, true);
  run.config["e"] = e;
  auto b = close_and_check(e, c);
  log_branch(run, log, b);
  Json j = branch_json(b);
  if (e >= 2) {
    try {
      auto m = factorize_power_minus_one(2, e, effort, run.cache());
      Factorization prod;
      for (const auto& pf : m) prod *= factorize(pf.prime - 1, effort, run.cache());
      j["data"]["mersenne"] = m.to_string();
      j["data"]["mersenne_primes"] = m.omega();
      j["data"]["q_minus_one_product"] = prod.to_string();
    } catch (const EffortExceeded&) {
      j["data"]["mersenne"] = nullptr;
    }
  }
  run.emit().record(j);
  return kOk;  // an undecidable branch is reported, not an error
}

int cmd_primorial(Run& run, unsigned r, bool all) {
  run.config["r"] = r;
  for (unsigned i = all ? 1 : r; i <= r; ++i) {
    auto p = primorial_probe(i);
    Json j;
    j["r"] = i;
    j["n"] = dec(p.n.value());
    j["factorization"] = p.n.to_string();
    j["h"] = to_string(p.h);
    j["integral"] = p.divisible;
    run.emit().record(j);
  }
  return kOk;
}

int cmd_cache(Run& run, const std::string& action) {
  FactorCache* cache = run.cache();
  if (!cache) throw DomainError("cache commands need a cache (drop --no-cache)");
  const std::string path = cache->path()->string();
  Json j;
  j["path"] = path;
  int code = kOk;
  if (action == "stats") {
    std::error_code ec;
    const auto bytes = std::filesystem::file_size(path, ec);
    j["entries"] = cache->size();
    j["bytes"] = ec ? 0 : bytes;
    j["rejected"] = cache->load_report().rejected;
    j["canonical"] = cache->load_report().canonical;
  } else if (action == "verify") {
    auto bad = cache->verify();
    const auto rejected = cache->load_report().rejected;
    j["entries"] = cache->size();
    j["rejected"] = rejected;
    Json arr = Json::array();
    for (const auto& n : bad) arr.push_back(dec(n));
    j["failing"] = arr;
    const bool ok = bad.empty() && rejected == 0;
    j["outcome"] = ok ? "ok" : "corrupt";
    code = ok ? kOk : kNegative;
  } else {
    const auto dropped = cache->load_report().rejected;
    cache->flush();
    j["entries"] = cache->size();
    j["dropped"] = dropped;
    j["outcome"] = "compacted";
  }
  run.emit().record(j);
  return code;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unitary-totient multiperfect numbers: arithmetic, smoothness tables and exhaustive search."};
  app.name(argv_in.empty() ? "phistar" : argv_in.front());
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.set_version_flag("--version", PHISTAR_VERSION);

  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_flag("--no-cache", g.no_cache, "Do not read or write the factor cache");
  app.add_option("--cache", g.cache_path, std::string("Factor cache file (default $") + kCacheEnv + " or " +
                                              kDefaultCache + ")");
  app.add_option("--manifest", g.manifest, "Write a run manifest (config, digest, timing) here");
  app.add_option("--trial-limit", g.trial_limit, "Factoring effort: trial division limit");
  app.add_option("--rho-iterations", g.rho_iterations, "Factoring effort: Pollard rho iterations");
  app.add_option("--pm1-bound", g.pm1_bound, "Factoring effort: Pollard p-1 bound");
  app.add_flag("--log", g.log, "Log per-branch progress to standard error");

  std::string n_text;
  auto* s_phistar = app.add_subcommand("phistar", "phi*(n) for a decimal or factored n");
  s_phistar->add_option("n", n_text)->required();
  auto* s_h = app.add_subcommand("h", "h(n) = n / phi*(n)");
  s_h->add_option("n", n_text)->required();
  auto* s_verify = app.add_subcommand("verify", "Is phi*(n) a divisor of n? Exit 1 when not");
  s_verify->add_option("n", n_text)->required();
  auto* s_known = app.add_subcommand("known", "The twelve known solutions");

  std::string bound, pbound, two = "odd", checkpoint;
  bool progress = false;
  auto* s_exp = app.add_subcommand("exponents", "All k with P(2^k - 1) < B");
  s_exp->add_option("--bound", bound)->required();
  s_exp->add_flag("--progress", progress);

  unsigned k = 0;
  auto* s_table = app.add_subcommand("table", "Primes p <= P with P(p^k - 1) < B");
  s_table->add_option("--k", k)->required()->check(CLI::Range(2u, 1u << 20));
  s_table->add_option("--bound", bound)->required();
  s_table->add_option("--pbound", pbound, "Largest p examined (default B)");
  s_table->add_option("--two", two, "Include p = 2: odd (only odd k), always, never")
      ->check(CLI::IsMember({"odd", "always", "never"}));
  s_table->add_option("--checkpoint", checkpoint, "Resume file");

  unsigned depth = 4;
  std::vector<std::string> unitary;
  auto* s_arrow = app.add_subcommand("arrow", "Forced prime powers from q^g || N, or check a chain a->b->c");
  s_arrow->add_option("seed", n_text)->required();
  s_arrow->add_option("--depth", depth)->check(CLI::Range(1u, 64u));
  s_arrow->add_option("--unitary", unitary, "Prime powers known to divide N exactly");

  std::string h_text = "2";
  unsigned r = 0;
  auto* s_cand = app.add_subcommand("candidates", "Next-prime candidates for a factored prefix m");
  s_cand->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  s_cand->add_option("m", n_text)->required();
  s_cand->add_option("--h", h_text, "Target h");
  s_cand->add_option("--r", r, "Total number of odd primes (default: those of m plus one)");

  SearchArgs sa;
  auto add_search_opts = [&](CLI::App* s) {
    s->set_help_flag("--help", "Print this help message and exit");
    s->add_option("--bound", sa.bound, "Every prime of N is below this");
    s->add_option("--cap", sa.cap, "Every odd prime power of N is at most this");
    s->add_option("--omega", sa.omega, "Largest number of distinct primes");
    s->add_option("--h", sa.h_targets, "Admissible values of h");
    s->add_flag("--initial-segment", sa.initial_segment, "Odd primes of N form an initial segment");
  };
  auto* s_search = app.add_subcommand("search", "Every solution with the given prime bound and power cap");
  add_search_opts(s_search);
  s_search->add_option("--jobs", sa.jobs)->check(CLI::Range(1u, 1024u));
  s_search->add_option("--exponents", sa.exponents, "Exponents of 2 (default: all with P(2^e - 1) < B)")
      ->delimiter(',');

  unsigned e = 0;
  auto* s_close = app.add_subcommand("close", "One 2^e branch of the search (bound defaults to the cap)");
  s_close->add_option("--e", e)->required();
  add_search_opts(s_close);

  auto* s_prim = app.add_subcommand("primorial", "h of the product of the first r primes");
  bool all = false;
  s_prim->add_option("--r", r)->required()->check(CLI::Range(1u, 10000u));
  s_prim->add_flag("--all", all, "Every r' from 1 to r");

  auto* s_cache = app.add_subcommand("cache", "Factor cache maintenance");
  s_cache->require_subcommand(1);
  auto* c_stats = s_cache->add_subcommand("stats", "Entry count and size");
  auto* c_verify = s_cache->add_subcommand("verify", "Re-check every entry; exit 1 on a bad entry");
  auto* c_compact = s_cache->add_subcommand("compact", "Rewrite sorted, dropping bad lines");

  std::vector<std::string> args(argv_in.rbegin(), argv_in.rend());
  if (!args.empty()) args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::string command;
  for (const auto& a : argv_in) command += (command.empty() ? "" : " ") + a;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Run run(g, out, err);
    int code = kOk;
    if (s_phistar->parsed()) code = cmd_phistar(run, n_text);
    else if (s_h->parsed()) code = cmd_h(run, n_text);
    else if (s_verify->parsed()) code = cmd_verify(run, n_text);
    else if (s_known->parsed()) code = cmd_known(run);
    else if (s_exp->parsed()) code = cmd_exponents(run, bound, progress);
    else if (s_table->parsed()) code = cmd_table(run, k, bound, pbound, two, checkpoint);
    else if (s_arrow->parsed()) code = cmd_arrow(run, n_text, depth, unitary, g.effort());
    else if (s_cand->parsed()) code = cmd_candidates(run, n_text, h_text, r);
    else if (s_search->parsed()) code = cmd_search(run, sa, g.effort(), g.log);
    else if (s_close->parsed()) code = cmd_close(run, e, sa, g.effort(), g.log);
    else if (s_prim->parsed()) code = cmd_primorial(run, r, all);
    else if (c_stats->parsed()) code = cmd_cache(run, "stats");
    else if (c_verify->parsed()) code = cmd_cache(run, "verify");
    else if (c_compact->parsed()) code = cmd_cache(run, "compact");
    run.emit().finish();
    run.write_manifest(command, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return code;
  } catch (const EffortExceeded& ex) {
    err << "error: " << ex.what() << " (raise --rho-iterations or --pm1-bound)\n";
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
  }
  return kError;
}

}  // namespace phistar::cli
