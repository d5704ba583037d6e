#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "latentspec/matrix.hpp"

namespace latentspec {

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has none
  Matrix values;
};

// Comma-separated numbers, '.' decimal point, no locale dependence. A
// first row containing any non-numeric field is taken as the header.
// Blank lines are ignored; ragged rows, NaN and Inf raise ParseError.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

// Scientific notation, 17 significant digits (round-trips exactly).
std::string format_double(double v);

void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header = {});
void write_csv_file(const std::string& path, const Matrix& values, const std::vector<std::string>& header = {});

}  // namespace latentspec
