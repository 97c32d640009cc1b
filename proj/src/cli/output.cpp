#include <algorithm>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "phistar/cli.hpp"

namespace phistar::cli {

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

void flatten_into(const Json& v, const std::string& key, FlatRecord& out) {
  auto child = [&](const std::string& k) { return key.empty() ? k : key + "." + k; };
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten_into(it.value(), child(it.key()), out);
  } else if (v.is_array()) {
    bool scalars = true;
    for (const auto& x : v) scalars = scalars && !x.is_structured();
    if (scalars) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + scalar_text(v[i]);
      out.emplace_back(key, s);
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) flatten_into(v[i], child(std::to_string(i)), out);
    }
  } else {
    out.emplace_back(key, scalar_text(v));
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string text_value(const Json& v) {
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + (v[i].is_structured() ? v[i].dump() : scalar_text(v[i]));
    return s;
  }
  return scalar_text(v);
}

void write_text(std::ostream& out, const Json& v, int indent) {
  for (auto it = v.begin(); it != v.end(); ++it) {
    out << std::string(indent, ' ') << it.key() << ":";
    if (it.value().is_object()) {
      out << "\n";
      write_text(out, it.value(), indent + 2);
    } else {
      const auto s = text_value(it.value());
      out << (s.empty() ? "" : " ") << s << "\n";
    }
  }
}

}  // namespace

FlatRecord flatten(const Json& record) {
  FlatRecord out;
  flatten_into(record, "", out);
  return out;
}

std::string to_csv(const std::vector<Json>& records) {
  std::vector<std::string> header;
  std::vector<FlatRecord> flat;
  for (const auto& r : records) {
    flat.push_back(flatten(r));
    for (const auto& [k, v] : flat.back())
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
  }
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + csv_cell(header[i]);
  s += "\n";
  for (const auto& row : flat) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) s += ",";
      for (const auto& [k, v] : row)
        if (k == header[i]) s += csv_cell(v);
    }
    s += "\n";
  }
  return s;
}

std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      lines.push_back(std::move(row));
      row.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV cell");
  if (!cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    lines.push_back(std::move(row));
  }
  std::vector<std::map<std::string, std::string>> out;
  if (lines.empty()) return out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].size() != lines[0].size()) throw std::invalid_argument("CSV row width differs from header");
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < lines[0].size(); ++i) m[lines[0][i]] = lines[r][i];
    out.push_back(std::move(m));
  }
  return out;
}

Emitter::Emitter(Format format, std::ostream& out) : format_(format), out_(out) {}

void Emitter::record(const Json& r) {
  const std::string line = r.dump();
  canonical_ += line + "\n";
  switch (format_) {
    case Format::Json:
      out_ << line << "\n" << std::flush;
      break;
    case Format::Text:
      if (!first_) out_ << "\n";
      write_text(out_, r, 0);
      out_ << std::flush;
      break;
    case Format::Csv:
      buffered_.push_back(r);
      break;
  }
  first_ = false;
}

void Emitter::finish() {
  if (format_ == Format::Csv && !buffered_.empty()) out_ << to_csv(buffered_);
  buffered_.clear();
  out_ << std::flush;
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return s.str();
}

}  // namespace phistar::cli
