#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jointlife {

// Minimal CSV support: comma separated, optional double quotes, no embedded
// newlines. Enough for the flat tables this project reads and writes.
std::vector<std::string> split_csv_line(std::string_view line);

class CsvTable {
 public:
  // Reads a header line followed by data rows. Blank lines are skipped.
  // Throws InputError on an empty stream, a missing required column, or a
  // row whose width differs from the header.
  static CsvTable read(std::istream& in, const std::vector<std::string>& required_columns = {});

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  bool has_column(std::string_view name) const;
  std::size_t column(std::string_view name) const;
  const std::string& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  // 1-based line number of a data row in the source, for diagnostics.
  std::size_t line_of(std::size_t row) const { return lines_[row]; }

  double number(std::size_t row, std::size_t col) const;

 private:
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

}  // namespace jointlife
