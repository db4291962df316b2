#include "qcp/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace qcp {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string at_line(int line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw CsvError("missing column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header)
    if (h == name) return true;
  return false;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw CsvError("row has " + std::to_string(row.size()) + " fields, header has " +
                   std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string format_number(std::optional<double> v) { return v ? format_number(*v) : std::string(); }

std::string format_int(long long v) { return std::to_string(v); }

void write_csv(std::ostream& os, const CsvTable& t) {
  if (!t.comment.empty()) os << "# " << t.comment << '\n';
  auto line = [&](const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

void write_csv(const std::string& path, const CsvTable& t) {
  if (path.empty() || path == "-") {
    write_csv(std::cout, t);
    return;
  }
  std::ofstream f(path);
  if (!f) throw CsvError("cannot open '" + path + "' for writing");
  write_csv(f, t);
  if (!f) throw CsvError("write to '" + path + "' failed");
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  int n = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!have_header && t.comment.empty()) t.comment = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      continue;
    }
    auto f = split(line);
    if (!have_header) {
      t.header = std::move(f);
      have_header = true;
      continue;
    }
    if (f.size() != t.header.size())
      throw CsvError(at_line(n) + "expected " + std::to_string(t.header.size()) + " fields, found " +
                     std::to_string(f.size()));
    t.rows.push_back(std::move(f));
    t.lines.push_back(n);
  }
  if (!have_header) throw CsvError("no header row");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CsvError("cannot open '" + path + "'");
  try {
    return read_csv(f);
  } catch (const CsvError& e) {
    throw CsvError(path + ": " + e.what());
  }
}

std::vector<double> numeric_column(const CsvTable& t, const std::string& name, bool allow_empty) {
  const std::size_t c = t.column(name);
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string& s = t.rows[i][c];
    const int line = i < t.lines.size() ? t.lines[i] : int(i) + 2;
    if (s.empty()) {
      if (!allow_empty) throw CsvError(at_line(line) + "empty field in column '" + name + "'");
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw CsvError(at_line(line) + "cannot parse '" + s + "' in column '" + name + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace qcp
