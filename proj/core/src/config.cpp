#include "scholarmetrics/config.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics::config {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, line > 0 ? fmt::format("line {}: {}", line, msg) : msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && quoted) {
      ++i;
    } else if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == '#' && !quoted) {
      return s.substr(0, i);
    }
  }
  return s;
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

std::optional<std::string> parse_string(std::string_view s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::nullopt;
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '"') return std::nullopt;
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i + 1 >= s.size()) return std::nullopt;
    switch (s[i]) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      default: return std::nullopt;
    }
  }
  return out;
}

std::optional<std::vector<std::string>> parse_array(std::string_view s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  std::string_view body = trim(s.substr(1, s.size() - 2));
  std::vector<std::string> out;
  while (!body.empty()) {
    if (body.front() != '"') return std::nullopt;
    std::size_t end = 1;
    while (end < body.size() && body[end] != '"') end += body[end] == '\\' ? 2 : 1;
    if (end >= body.size()) return std::nullopt;
    auto item = parse_string(body.substr(0, end + 1));
    if (!item) return std::nullopt;
    out.push_back(std::move(*item));
    body = trim(body.substr(end + 1));
    if (body.empty()) break;
    if (body.front() != ',') return std::nullopt;
    body = trim(body.substr(1));  // trailing comma allowed
  }
  return out;
}

}  // namespace

std::optional<Value> parse_value(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text == "true") return Value{true};
  if (text == "false") return Value{false};
  if (text.front() == '"') {
    if (auto s = parse_string(text)) return Value{std::move(*s)};
    return std::nullopt;
  }
  if (text.front() == '[') {
    if (auto a = parse_array(text)) return Value{std::move(*a)};
    return std::nullopt;
  }
  std::string digits;
  for (char c : text) {
    if (c != '_') digits.push_back(c);
  }
  const char* first = digits.data();
  const char* last = digits.data() + digits.size();
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc() && p == last) {
    return Value{i};
  }
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(first, last, d); ec == std::errc() && p == last) {
    return Value{d};
  }
  return std::nullopt;
}

Document parse_document(std::string_view text) {
  Document doc;
  std::string current;
  bool in_table = false;
  int line_no = 0;
  std::size_t pos = 0;

  auto next_line = [&](std::string_view& line) {
    if (pos > text.size()) return false;
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view raw;
  while (next_line(raw)) {
    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated table header");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (!valid_key(name)) fail(line_no, "invalid table name");
      if (doc.contains(name)) fail(line_no, "duplicate table [" + name + "]");
      doc[name];
      current = name;
      in_table = true;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) fail(line_no, "invalid key '" + key + "'");
    if (!in_table) fail(line_no, "key '" + key + "' outside of a table");
    std::string value_text(trim(line.substr(eq + 1)));
    const int start_line = line_no;
    // Arrays may continue over following lines until the closing bracket.
    if (!value_text.empty() && value_text.front() == '[') {
      while (value_text.back() != ']') {
        std::string_view more;
        if (!next_line(more)) fail(start_line, "unterminated array");
        auto piece = trim(strip_comment(more));
        if (!piece.empty()) {
          value_text += ' ';
          value_text += piece;
        }
      }
    }
    auto value = parse_value(value_text);
    if (!value) fail(start_line, "cannot parse value for '" + key + "'");
    auto& table = doc[current];
    if (table.contains(key)) fail(start_line, "duplicate key '" + key + "'");
    table.emplace(key, Entry{std::move(*value), start_line});
  }
  return doc;
}

void apply_override(Document& doc, std::string_view assignment) {
  auto eq = assignment.find('=');
  auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    fail(0, "override must look like table.key=value: " + std::string(assignment));
  }
  std::string table(trim(assignment.substr(0, dot)));
  std::string key(trim(assignment.substr(dot + 1, eq - dot - 1)));
  if (!valid_key(table) || !valid_key(key)) {
    fail(0, "invalid override target: " + std::string(assignment));
  }
  std::string_view raw = trim(assignment.substr(eq + 1));
  Value v = parse_value(raw).value_or(Value{std::string(raw)});
  doc[table][key] = Entry{std::move(v), 0};
}

std::string_view type_name(const Value& v) noexcept {
  switch (v.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "real";
    case 3: return "string";
    default: return "string array";
  }
}

const Entry* Reader::find(const std::string& table, const std::string& key) {
  auto t = doc_.find(table);
  if (t == doc_.end()) return nullptr;
  auto e = t->second.find(key);
  if (e == t->second.end()) return nullptr;
  used_[table][key] = true;
  return &e->second;
}

void Reader::type_error(const std::string& table, const std::string& key, const Entry& e,
                        std::string_view expected) const {
  fail(e.line, fmt::format("{}.{} must be a {}, got {}", table, key, expected, type_name(e.value)));
}

std::optional<std::string> Reader::string(const std::string& table, const std::string& key) {
  const Entry* e = find(table, key);
  if (!e) return std::nullopt;
  if (auto* s = std::get_if<std::string>(&e->value)) return *s;
  type_error(table, key, *e, "string");
}

std::optional<std::int64_t> Reader::integer(const std::string& table, const std::string& key) {
  const Entry* e = find(table, key);
  if (!e) return std::nullopt;
  if (auto* i = std::get_if<std::int64_t>(&e->value)) return *i;
  type_error(table, key, *e, "integer");
}

std::optional<double> Reader::real(const std::string& table, const std::string& key) {
  const Entry* e = find(table, key);
  if (!e) return std::nullopt;
  if (auto* d = std::get_if<double>(&e->value)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&e->value)) return static_cast<double>(*i);
  type_error(table, key, *e, "number");
}

std::optional<bool> Reader::boolean(const std::string& table, const std::string& key) {
  const Entry* e = find(table, key);
  if (!e) return std::nullopt;
  if (auto* b = std::get_if<bool>(&e->value)) return *b;
  type_error(table, key, *e, "boolean");
}

std::optional<std::vector<std::string>> Reader::strings(const std::string& table,
                                                        const std::string& key) {
  const Entry* e = find(table, key);
  if (!e) return std::nullopt;
  if (auto* a = std::get_if<std::vector<std::string>>(&e->value)) return *a;
  // A single string from a command-line override reads as a comma list.
  if (auto* s = std::get_if<std::string>(&e->value)) {
    std::vector<std::string> out;
    std::string_view rest = *s;
    while (!rest.empty()) {
      auto comma = rest.find(',');
      auto item = trim(rest.substr(0, comma));
      if (!item.empty()) out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }
  type_error(table, key, *e, "string array");
}

void Reader::reject_unknown(const std::set<std::string>& known_tables) const {
  for (const auto& [table, entries] : doc_) {
    if (!known_tables.contains(table)) fail(0, "unknown table [" + table + "]");
    auto u = used_.find(table);
    for (const auto& [key, entry] : entries) {
      if (u == used_.end() || !u->second.contains(key)) {
        fail(entry.line, fmt::format("unknown key {}.{}", table, key));
      }
    }
  }
}

}  // namespace scholarmetrics::config
