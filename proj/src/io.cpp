#include "nrpt/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <optional>
#include <sstream>
#include <utility>

#include "nrpt/errors.hpp"

namespace nrpt {

std::string format_real(double value) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
  if (!out_) {
    throw ConfigError("cannot open " + path.string() + " for writing");
  }
  for (const std::string& column : header) {
    add(column);
  }
  end_row();
}

void CsvWriter::separator() {
  if (!first_) line_ += ',';
  first_ = false;
}

CsvWriter& CsvWriter::add(double value) {
  separator();
  line_ += format_real(value);
  return *this;
}

CsvWriter& CsvWriter::add(std::uint64_t value) {
  separator();
  line_ += std::to_string(value);
  return *this;
}

CsvWriter& CsvWriter::add(std::int64_t value) {
  separator();
  line_ += std::to_string(value);
  return *this;
}

CsvWriter& CsvWriter::add(const std::string& value) {
  separator();
  line_ += value;
  return *this;
}

void CsvWriter::end_row() {
  line_ += '\n';
  out_ << line_;
  line_.clear();
  first_ = true;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  return cells;
}

double parse_real(const std::string& text, const std::filesystem::path& path) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ConfigError("schedule file " + path.string() + ": cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<double> read_schedule_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read schedule file " + path.string());
  }
  std::vector<double> betas;
  std::vector<double> rounds;
  std::size_t column = 0;
  std::optional<std::size_t> round_column;
  bool header_seen = false;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (!header_seen) {
      header_seen = true;
      bool numeric = true;
      try {
        parse_real(cells.at(0), path);
      } catch (const ConfigError&) {
        numeric = false;
      }
      if (!numeric) {
        std::size_t i = 0;
        while (i < cells.size() && cells[i] != "beta") ++i;
        if (i == cells.size()) {
          throw ConfigError("schedule file " + path.string() + " has no 'beta' column");
        }
        column = i;
        for (std::size_t r = 0; r < cells.size(); ++r) {
          if (cells[r] == "round") round_column = r;
        }
        continue;
      }
    }
    if (column >= cells.size()) {
      throw ConfigError("schedule file " + path.string() + ": short row '" + line + "'");
    }
    betas.push_back(parse_real(cells[column], path));
    if (round_column) {
      rounds.push_back(parse_real(cells.at(*round_column), path));
    }
  }
  if (round_column && !rounds.empty()) {
    // A multi-round schedule log: keep the last round only.
    const double last = *std::max_element(rounds.begin(), rounds.end());
    std::vector<double> kept;
    for (std::size_t i = 0; i < betas.size(); ++i) {
      if (rounds[i] == last) kept.push_back(betas[i]);
    }
    betas = std::move(kept);
  }
  return betas;
}

}  // namespace nrpt
