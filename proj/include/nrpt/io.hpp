#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace nrpt {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

/// Comma-separated writer with '\n' line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& add(double value);
  CsvWriter& add(std::uint64_t value);
  CsvWriter& add(std::int64_t value);
  CsvWriter& add(int value) { return add(static_cast<std::int64_t>(value)); }
  CsvWriter& add(const std::string& value);
  void end_row();

 private:
  void separator();

  std::ofstream out_;
  std::string line_;
  bool first_ = true;
};

/// Reads an annealing schedule: one beta per line, or a CSV whose column
/// named "beta" holds the grid. When a "round" column is present only the
/// rows of the last round are kept. Blank lines and '#' comments are ignored.
std::vector<double> read_schedule_file(const std::filesystem::path& path);

}  // namespace nrpt
