#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mmlasso {

//! A parsed numeric CSV: header names plus a dense value matrix.
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // rows x columns
};

//! Parse a comma-separated numeric file with a mandatory header row ('.'
//! decimal, no quoting). Throws std::runtime_error with a line-numbered
//! message on ragged rows or non-numeric cells.
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mmlasso
