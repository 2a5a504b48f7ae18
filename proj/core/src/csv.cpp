#include "entrywise/csv.hpp"
#include "entrywise/format.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace entrywise {

namespace {

constexpr const char* kVersionPrefix = "# entrywise csv v1 kind=";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::string kind, std::vector<std::string> columns,
                     const std::vector<std::string>& notes)
    : out_(out), kind_(std::move(kind)), columns_(columns.size()) {
  if (columns.empty()) throw std::invalid_argument("csv: no columns");
  out_ << kVersionPrefix << kind_ << '\n';
  for (const auto& note : notes) out_ << "# " << note << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::runtime_error("csv " + kind_ + ": row has " + std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  ++rows_;
}

void CsvWriter::finish(std::size_t expected) {
  out_.flush();
  if (!out_) throw std::runtime_error("csv " + kind_ + ": write failed");
  if (rows_ != expected)
    throw std::runtime_error("csv " + kind_ + ": wrote " + std::to_string(rows_) + " rows, expected " +
                             std::to_string(expected));
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("csv: no column named " + name);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind(kVersionPrefix, 0) != 0)
    throw std::runtime_error("csv: missing version line");
  table.kind = line.substr(std::string(kVersionPrefix).size());
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0 && table.columns.empty()) {
      table.notes.push_back(line.substr(2));
      continue;
    }
    if (table.columns.empty()) {
      table.columns = split(line);
      continue;
    }
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.columns.size()) throw std::runtime_error("csv: ragged row: " + line);
    table.rows.push_back(std::move(cells));
  }
  if (table.columns.empty()) throw std::runtime_error("csv: missing header row");
  return table;
}

}  // namespace entrywise
