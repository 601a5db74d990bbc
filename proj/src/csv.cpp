#include "mmlasso/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mmlasso {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open input file: " + path);

  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file (a header row is required)");
  for (const auto& name : split_line(line)) table.header.push_back(trim(name));
  const std::size_t cols = table.header.size();
  if (cols == 0) throw std::runtime_error(path + ":1: empty header row");

  std::vector<double> data;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != cols) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(cols) +
                               " fields, found " +
                               std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string f = trim(fields[c]);
      double v = 0.0;
      const char* begin = f.data();
      const char* end = f.data() + f.size();
      auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() || ptr != end) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": non-numeric value '" + f + "' in column '" +
                                 table.header[c] + "'");
      }
      data.push_back(v);
    }
  }
  const auto rows = static_cast<Eigen::Index>(data.size() / cols);
  table.values.resize(rows, static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(cols); ++c)
      table.values(r, c) = data[static_cast<std::size_t>(r) * cols +
                                static_cast<std::size_t>(c)];
  return table;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace mmlasso
