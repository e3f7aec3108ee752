#include "jointlife/csv.hpp"

#include <charconv>
#include <istream>

#include "jointlife/common.hpp"

namespace jointlife {

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

CsvTable CsvTable::read(std::istream& in, const std::vector<std::string>& required_columns) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      t.header_ = std::move(fields);
      for (std::size_t i = 0; i < t.header_.size(); ++i) t.index_[t.header_[i]] = i;
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size())
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.header_.size()) +
                       " fields, found " + std::to_string(fields.size()));
    t.rows_.push_back(std::move(fields));
    t.lines_.push_back(line_no);
  }
  if (!have_header) throw InputError("empty CSV input");
  for (const auto& col : required_columns)
    if (!t.has_column(col)) throw InputError("missing required column '" + col + "'");
  return t;
}

bool CsvTable::has_column(std::string_view name) const { return index_.count(std::string(name)) > 0; }

std::size_t CsvTable::column(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw InputError("missing column '" + std::string(name) + "'");
  return it->second;
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& s = rows_[row][col];
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw InputError("line " + std::to_string(lines_[row]) + ": '" + s + "' in column '" + header_[col] +
                     "' is not a number");
  return v;
}

}  // namespace jointlife
