#pragma once

#include "bglasso/matrix_core.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace bglasso {

struct Dataset {
  Matrix values;                           // n × p, all finite
  std::vector<std::string> column_labels;  // empty when the file has no header

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

/// Malformed input. Row and column are 1-based file positions (0 when not
/// applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Comma-separated numeric table. A first row containing any non-numeric
/// cell is taken as the header. Blank lines are skipped. With `standardize`
/// each column is centred and divided by its sample standard deviation
/// (n - 1 denominator).
Dataset parse_csv(std::istream& in, bool standardize);
Dataset ingest_csv(const std::string& path, bool standardize);

/// Column-wise centring and scaling to unit sample standard deviation.
/// Throws std::invalid_argument for n < 2 or a constant column.
void standardize_columns(Matrix& values);

}  // namespace bglasso
