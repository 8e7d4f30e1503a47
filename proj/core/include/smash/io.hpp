#ifndef SMASH_IO_HPP
#define SMASH_IO_HPP

#include <iosfwd>
#include <string>
#include <variant>

#include "smash/geometry.hpp"

namespace smash {

/// One point per line, d whitespace- or comma-separated columns. Blank lines and
/// lines starting with '#' are skipped.
PointSet read_points(std::istream& is);
PointSet read_points_file(const std::string& path);

/// Rows of a numeric CSV/whitespace table.
MatrixXd read_table(std::istream& is);
MatrixXd read_table_file(const std::string& path);

enum class VectorFormat { text, binary };

/// Text holds one value per line (complex as "re im"); binary is raw little-endian
/// doubles (complex as interleaved re, im).
template <typename Scalar>
Vector<Scalar> read_vector_file(const std::string& path, VectorFormat fmt);
template <typename Scalar>
void write_vector_file(const std::string& path, const Vector<Scalar>& v, VectorFormat fmt);

/// A table cell; monostate marks a column that could not be computed.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct ExperimentReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Index column(const std::string& col) const;
  /// Numeric value of a cell; NaN when absent.
  double number(std::size_t row, const std::string& col) const;
  void add_row(std::vector<Cell> row);
};

void write_csv(const ExperimentReport& r, std::ostream& os);
void write_json(const ExperimentReport& r, std::ostream& os);

}  // namespace smash

#endif
