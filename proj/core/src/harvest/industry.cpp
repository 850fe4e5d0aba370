#include "scholarmetrics/harvest/industry.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "scholarmetrics/error.hpp"
#include "scholarmetrics/hash.hpp"

namespace scholarmetrics::harvest {

namespace {

std::string lower(std::string_view s) {
  std::string out{s};
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

IndustryKeywordList::IndustryKeywordList(std::vector<std::string> keywords) {
  std::unordered_set<std::string> seen;
  for (auto& k : keywords) {
    std::string term = collapse_ws(lower(k));
    if (term.empty()) continue;
    if (!seen.insert(term).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate industry keyword '" + term + "'");
    }
    keywords_.push_back(std::move(term));
  }
  if (keywords_.empty()) throw Error(ErrorKind::InvalidArgument, "industry keyword list is empty");
  std::string joined;
  for (const auto& k : keywords_) joined += k + '\n';
  hash_ = sha256_hex(joined);
}

IndustryKeywordList IndustryKeywordList::parse(std::string_view text) {
  std::vector<std::string> terms;
  std::istringstream in{std::string{text}};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    terms.push_back(line);
  }
  return IndustryKeywordList(std::move(terms));
}

IndustryKeywordList IndustryKeywordList::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read keyword file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool classify_industry(std::string_view raw_affiliation, const IndustryKeywordList& keywords) {
  if (raw_affiliation.empty()) return false;
  const std::string text = lower(raw_affiliation);
  for (const auto& term : keywords.keywords()) {
    const bool boundary = term.size() <= kBoundaryMatchMaxLength;
    for (auto pos = text.find(term); pos != std::string::npos; pos = text.find(term, pos + 1)) {
      if (!boundary) return true;
      const auto end = pos + term.size();
      const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
      const bool right_ok = end == text.size() || !is_word_char(text[end]);
      if (left_ok && right_ok) return true;
    }
  }
  return false;
}

std::string normalize_organization(std::string_view name) {
  std::string s = collapse_ws(lower(name));
  auto is_trim = [](unsigned char c) { return std::ispunct(c) || std::isspace(c); };
  while (!s.empty() && is_trim(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && is_trim(static_cast<unsigned char>(s[start]))) ++start;
  return s.substr(start);
}

}  // namespace scholarmetrics::harvest
