#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace varcomp {

/// A numeric table with optional column names. Delimiters may be commas,
/// tabs or runs of spaces; a first line containing any non-numeric field is
/// taken as the header.
struct Table {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

Table read_table(const std::filesystem::path& path);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// Shortest decimal representation that round-trips.
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace varcomp
