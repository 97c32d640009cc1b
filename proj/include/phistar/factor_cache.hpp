#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "phistar/factorization.hpp"
#include "phistar/natural.hpp"

namespace phistar {

// Persistent factorization cache.
//
// File format: UTF-8 text, one entry per line, `n=p1^e1*p2^e2*...` in decimal,
// sorted by n (numerically), newline-terminated. Inserts are appended
// immediately (write-through); flush() rewrites the file in canonical sorted
// order. Every entry is re-multiplied and its primes re-tested when loaded.
class FactorCache {
 public:
  struct LoadReport {
    std::size_t entries = 0;
    std::size_t rejected = 0;    // lines that failed validation
    bool canonical = true;       // file was already sorted and de-duplicated
  };

  FactorCache() = default;  // in-memory only
  explicit FactorCache(std::filesystem::path file);
  ~FactorCache();

  FactorCache(const FactorCache&) = delete;
  FactorCache& operator=(const FactorCache&) = delete;

  std::optional<Factorization> lookup(const Natural& n) const;
  /// Precondition: f.value() == n and f is complete. Ignored if already present.
  void insert(const Natural& n, const Factorization& f);

  std::size_t size() const;
  bool dirty() const;
  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }
  const LoadReport& load_report() const noexcept { return report_; }

  /// Rewrites the backing file sorted by n. No-op for in-memory caches.
  void flush();

  /// Canonical text of all entries (exactly what flush() writes).
  std::string serialize() const;
  static std::string format_entry(const Natural& n, const Factorization& f);
  /// Parses one line; returns nullopt for malformed or invalid entries.
  static std::optional<std::pair<Natural, Factorization>> parse_entry(const std::string& line);

  /// Re-verifies every in-memory entry; returns the keys that fail.
  std::vector<Natural> verify() const;

 private:
  struct NumericLess {
    bool operator()(const Natural& a, const Natural& b) const { return cmp(a, b) < 0; }
  };

  void load();

  mutable std::mutex mutex_;
  std::map<Natural, Factorization, NumericLess> entries_;
  std::optional<std::filesystem::path> path_;
  LoadReport report_;
  bool dirty_ = false;
};

}  // namespace phistar
