#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scholarmetrics::config {

/// A TOML subset: `[table]` headers, `key = value` lines, `#` comments.
/// Values are strings ("..."), integers, reals, booleans and arrays of strings
/// (which may span several lines).
using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<std::string>>;

struct Entry {
  Value value;
  int line = 0;  ///< 0 for values that did not come from the file
};

using Table = std::map<std::string, Entry>;
using Document = std::map<std::string, Table>;

/// Throws Error{ConfigError} with the line number on malformed input,
/// duplicate tables or duplicate keys.
Document parse_document(std::string_view text);

/// Parses a single value as it would appear on the right of `=`.
std::optional<Value> parse_value(std::string_view text);

/// Applies `table.key=value`. Values that do not parse are taken as bare strings.
void apply_override(Document& doc, std::string_view assignment);

std::string_view type_name(const Value& v) noexcept;

/// Typed access with ConfigError on type mismatch; the entry is marked used.
class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  std::optional<std::string> string(const std::string& table, const std::string& key);
  std::optional<std::int64_t> integer(const std::string& table, const std::string& key);
  std::optional<double> real(const std::string& table, const std::string& key);
  std::optional<bool> boolean(const std::string& table, const std::string& key);
  std::optional<std::vector<std::string>> strings(const std::string& table,
                                                  const std::string& key);

  /// Throws ConfigError naming the first unknown table or unread key.
  void reject_unknown(const std::set<std::string>& known_tables) const;

 private:
  const Entry* find(const std::string& table, const std::string& key);
  [[noreturn]] void type_error(const std::string& table, const std::string& key,
                               const Entry& e, std::string_view expected) const;

  const Document& doc_;
  std::map<std::string, std::map<std::string, bool>> used_;
};

}  // namespace scholarmetrics::config
