#include "bglasso/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

namespace bglasso {

namespace {

std::string located(const std::string& what, std::size_t row, std::size_t column) {
  std::ostringstream msg;
  msg << what;
  if (row) msg << " (row " << row;
  if (row && column) msg << ", column " << column;
  if (row) msg << ')';
  return msg.str();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

// Parses the whole cell or nothing. Accepts "nan"/"inf" so that they can be
// reported as non-finite rather than non-numeric.
std::optional<double> to_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(located(what, row, column)), row_(row), column_(column) {}

void standardize_columns(Matrix& values) {
  const Index n = values.rows();
  if (n < 2) throw std::invalid_argument("standardization needs at least two rows");
  for (Index j = 0; j < values.cols(); ++j) {
    auto col = values.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
      throw std::invalid_argument("column " + std::to_string(j + 1) + " is constant and cannot be standardized");
    }
    col /= sd;
  }
}

Dataset parse_csv(std::istream& in, bool standardize) {
  Dataset data;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool first_content_line = true;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);

    if (first_content_line) {
      first_content_line = false;
      width = cells.size();
      bool any_text = false;
      for (auto c : cells) any_text = any_text || !to_number(c).has_value();
      if (any_text) {
        for (auto c : cells) data.column_labels.emplace_back(c);
        continue;
      }
    }

    if (cells.size() != width) {
      throw ParseError("ragged row: expected " + std::to_string(width) + " fields, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) {
      const auto v = to_number(cells[j]);
      if (!v) throw ParseError("non-numeric value '" + std::string(cells[j]) + "'", line_no, j + 1);
      if (!std::isfinite(*v)) throw ParseError("non-finite value '" + std::string(cells[j]) + "'", line_no, j + 1);
      row[j] = *v;
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw ParseError("no numeric rows in input");
  data.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t j = 0; j < width; ++j) data.values(static_cast<Index>(t), static_cast<Index>(j)) = rows[t][j];
  }
  if (standardize) standardize_columns(data.values);
  return data;
}

Dataset ingest_csv(const std::string& path, bool standardize) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_csv(in, standardize);
}

}  // namespace bglasso
