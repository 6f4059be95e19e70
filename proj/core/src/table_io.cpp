#include "varcomp/table_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "varcomp/error.hpp"

namespace varcomp {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  char delim = 0;
  if (line.find(',') != std::string::npos) {
    delim = ',';
  } else if (line.find('\t') != std::string::npos) {
    delim = '\t';
  }
  auto trim = [](std::string s) {
    auto first = s.find_first_not_of(" \t\r\"");
    auto last = s.find_last_not_of(" \t\r\"");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  };
  if (delim != 0) {
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delim)) {
      fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == delim) {
      fields.emplace_back();
    }
  } else {
    std::istringstream in(line);
    std::string field;
    while (in >> field) {
      fields.push_back(trim(field));
    }
  }
  return fields;
}

bool parse_number(const std::string& text, double& value) {
  if (text.empty()) {
    return false;
  }
  const char* begin = text.data();
  if (*begin == '+') {
    ++begin;
  }
  auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  Table table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      numeric = numeric && parse_number(fields[i], row[i]);
    }
    if (!numeric) {
      if (rows.empty() && table.header.empty()) {
        table.header = std::move(fields);
        continue;
      }
      throw Error(ErrorCode::IoError,
                  path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::IoError,
                  path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  std::size_t cols = rows.empty() ? table.header.size() : rows.front().size();
  if (!table.header.empty() && table.header.size() != cols) {
    throw Error(ErrorCode::IoError, path.string() + ": header has " +
                                        std::to_string(table.header.size()) +
                                        " fields but rows have " + std::to_string(cols));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  return read_table(path).values;
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << contents;
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path.string());
  }
}

}  // namespace varcomp
