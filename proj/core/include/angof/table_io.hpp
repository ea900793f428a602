#pragma once

// CSV ingestion and the plain-text critical-value cache.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "angof/critical_values.hpp"
#include "angof/empirical.hpp"

namespace angof {

struct DataTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // NaN marks a missing cell
  std::size_t rows = 0;
  std::size_t missing = 0;

  /// Column index by header name, or by 1-based number when `key` is an
  /// integer that is not itself a header name.
  std::size_t column(const std::string& key) const;
};

DataTable parse_csv(std::istream& in, const std::string& source = "<stream>");
DataTable read_csv(const std::string& path);

/// Complete cases of two columns; `dropped` receives the number of rows
/// with a missing value in either column.
BivariateSample pair_sample(const DataTable& t, std::size_t a, std::size_t b, std::size_t* dropped = nullptr);

/// %.17g, so that a write/read round trip is exact.
std::string format_real(double v);

void write_table(std::ostream& out, const CriticalValueTable& t);
CriticalValueTable read_table(std::istream& in, const std::string& source = "<stream>");
void save_table(const std::string& path, const CriticalValueTable& t);
CriticalValueTable load_table(const std::string& path);

}  // namespace angof
