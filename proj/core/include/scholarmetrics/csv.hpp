#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace scholarmetrics {

/// RFC-4180 field quoting: quotes fields containing comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// Shortest round-trip decimal form of a double ("0.1", "154.767", "1e-12").
std::string format_real(double value);

/// Writes a header row on construction and CRLF-free rows after it.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);
  std::size_t rows_written() const noexcept { return rows_; }

 private:
  void write_fields(const std::vector<std::string>& fields);

  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
};

/// Minimal RFC-4180 reader (used by tests and the export stage's own checks).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace scholarmetrics
