#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace phistar::cli {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv, Text };

enum ExitCode : int { kOk = 0, kNegative = 1, kError = 2, kUsage = 3 };

/// Runs one command line (argv[0] is the program name). Output records go to
/// `out`, diagnostics and usage errors to `err`.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Writes records as they arrive in the chosen format. JSON is one object per
/// line; CSV is buffered so the header can cover every key.
class Emitter {
 public:
  Emitter(Format format, std::ostream& out);
  void record(const Json& r);
  void finish();
  /// The records as JSON lines, whatever the output format. Digests use this.
  const std::string& canonical() const noexcept { return canonical_; }

 private:
  Format format_;
  std::ostream& out_;
  std::string canonical_;
  std::vector<Json> buffered_;
  bool first_ = true;
};

using FlatRecord = std::vector<std::pair<std::string, std::string>>;

/// Nested keys joined with '.', scalar arrays joined with ';', null as "".
FlatRecord flatten(const Json& record);
std::string to_csv(const std::vector<Json>& records);
/// Rows as key -> cell, using the header line for keys.
std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text);

std::string sha256_hex(const std::string& bytes);

}  // namespace phistar::cli
