#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcp {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Comma-separated table with an optional leading '#' comment line.
struct CsvTable {
  std::string comment;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;  // source line of each row when read from a stream

  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  void add_row(std::vector<std::string> row);
};

std::string format_number(double v);
std::string format_number(std::optional<double> v);  // empty when absent
std::string format_int(long long v);

void write_csv(std::ostream& os, const CsvTable& t);
void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

// Numeric column; empty fields are rejected unless `allow_empty`, in which case they become NaN.
std::vector<double> numeric_column(const CsvTable& t, const std::string& name, bool allow_empty = false);

}  // namespace qcp
