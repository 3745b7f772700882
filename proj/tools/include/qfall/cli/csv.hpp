#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qfall::cli {

/// Numeric table written as RFC 4180 CSV: header row, CRLF line ends, '.'
/// decimal point, 17 significant digits.
struct CsvTable {
  std::string file;  ///< file name relative to the output directory
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_double(double value);
void write_csv(std::ostream& out, const CsvTable& table);

}  // namespace qfall::cli
