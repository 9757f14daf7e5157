#pragma once

// Minimal CSV writer/reader. Numbers are written in the shortest decimal form
// that parses back to the same double.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scl {

std::string format_number(double v);

class CsvWriter {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<Cell>& cells);
  std::size_t rows() const noexcept { return rows_; }
  std::size_t columns() const noexcept { return columns_; }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws InvalidArgument for unknown columns.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> numbers(std::string_view column) const;
  std::vector<std::string> strings(std::string_view column) const;
};

/// Throws InvalidArgument for unreadable files and ragged rows.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace scl
