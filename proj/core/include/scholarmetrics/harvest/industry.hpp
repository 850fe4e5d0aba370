#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scholarmetrics::harvest {

/// Lowercase match terms for industry affiliations. Terms of four characters or
/// fewer ("inc", "ltd", "ibm") only match at token boundaries; longer terms match
/// as plain substrings.
class IndustryKeywordList {
 public:
  /// Throws InvalidArgument when empty or when two terms collide after lowercasing.
  explicit IndustryKeywordList(std::vector<std::string> keywords);

  /// One term per line; blank lines and `#` comments are ignored.
  static IndustryKeywordList parse(std::string_view text);
  static IndustryKeywordList load(const std::filesystem::path& path);

  const std::vector<std::string>& keywords() const noexcept { return keywords_; }
  std::size_t size() const noexcept { return keywords_.size(); }
  /// SHA-256 over the normalized term list; recorded in corpus provenance.
  const std::string& hash() const noexcept { return hash_; }

 private:
  std::vector<std::string> keywords_;
  std::string hash_;
};

inline constexpr std::size_t kBoundaryMatchMaxLength = 4;

bool classify_industry(std::string_view raw_affiliation, const IndustryKeywordList& keywords);

/// Lowercase, punctuation trimmed from both ends, internal whitespace collapsed.
std::string normalize_organization(std::string_view name);

}  // namespace scholarmetrics::harvest
