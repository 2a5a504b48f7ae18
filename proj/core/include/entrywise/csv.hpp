#pragma once

#include "entrywise/format.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace entrywise {

// Writes
//   # entrywise csv v1 kind=<kind>
//   # <note>            (zero or more)
//   col1,col2,...
//   rows...
// Cells are written verbatim; callers format numbers with format_double.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::string kind, std::vector<std::string> columns,
            const std::vector<std::string>& notes = {});

  void row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_; }
  // Throws std::runtime_error unless exactly `expected` rows were written.
  void finish(std::size_t expected);

 private:
  std::ostream& out_;
  std::string kind_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

struct CsvTable {
  std::string kind;
  std::vector<std::string> notes;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Index of `name` in columns; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

// Parses the layout above. Throws std::runtime_error on a missing version line
// or ragged rows.
CsvTable read_csv(std::istream& in);

}  // namespace entrywise
