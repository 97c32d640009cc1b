#include "phistar/factor_cache.hpp"

#include <fstream>
#include <sstream>

#include "phistar/primes.hpp"

namespace phistar {
namespace {

bool entry_valid(const Natural& n, const Factorization& f) {
  if (f.value() != n) return false;
  for (const auto& pf : f.factors()) {
    if (!is_prime(pf.prime)) return false;
  }
  return true;
}

}  // namespace

FactorCache::FactorCache(std::filesystem::path file) : path_(std::move(file)) { load(); }

FactorCache::~FactorCache() {
  try {
    if (dirty_) flush();
  } catch (...) {
  }
}

void FactorCache::load() {
  std::ifstream in(*path_);
  if (!in) return;
  std::string line;
  const Natural* prev = nullptr;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto parsed = parse_entry(line);
    if (!parsed) {
      ++report_.rejected;
      report_.canonical = false;
      continue;
    }
    auto [it, inserted] = entries_.emplace(std::move(parsed->first), std::move(parsed->second));
    if (!inserted || (prev && cmp(*prev, it->first) >= 0)) report_.canonical = false;
    prev = &it->first;
  }
  report_.entries = entries_.size();
  if (report_.rejected) dirty_ = true;
}

std::optional<Factorization> FactorCache::lookup(const Natural& n) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(n);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void FactorCache::insert(const Natural& n, const Factorization& f) {
  std::lock_guard lock(mutex_);
  auto [it, inserted] = entries_.emplace(n, f);
  if (!inserted) return;
  dirty_ = true;
  if (path_) {
    if (path_->has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path_->parent_path(), ec);
    }
    std::ofstream out(*path_, std::ios::app);
    out << format_entry(n, f) << '\n';
  }
}

std::size_t FactorCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

bool FactorCache::dirty() const {
  std::lock_guard lock(mutex_);
  return dirty_;
}

std::string FactorCache::serialize() const {
  std::lock_guard lock(mutex_);
  std::string text;
  for (const auto& [n, f] : entries_) {
    text += format_entry(n, f);
    text += '\n';
  }
  return text;
}

void FactorCache::flush() {
  if (!path_) return;
  const std::string text = serialize();
  std::lock_guard lock(mutex_);
  if (path_->has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_->parent_path(), ec);
  }
  auto tmp = *path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, *path_);
  dirty_ = false;
}

std::string FactorCache::format_entry(const Natural& n, const Factorization& f) {
  return to_decimal(n) + "=" + f.to_explicit_string();
}

std::optional<std::pair<Natural, Factorization>> FactorCache::parse_entry(const std::string& line) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) return std::nullopt;
  try {
    Natural n = parse_natural(line.substr(0, eq));
    Factorization f = Factorization::parse(line.substr(eq + 1));
    if (!entry_valid(n, f)) return std::nullopt;
    return std::make_pair(std::move(n), std::move(f));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<Natural> FactorCache::verify() const {
  std::lock_guard lock(mutex_);
  std::vector<Natural> bad;
  for (const auto& [n, f] : entries_) {
    if (!entry_valid(n, f)) bad.push_back(n);
  }
  return bad;
}

}  // namespace phistar
