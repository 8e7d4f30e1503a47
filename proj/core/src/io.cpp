#include "smash/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "smash/cluster_tree.hpp"

namespace smash {

namespace {

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw ValidationError("cannot open " + path);
  return is;
}

std::vector<double> parse_line(std::string line) {
  for (char& c : line)
    if (c == ',' || c == ';' || c == '\t') c = ' ';
  std::istringstream ss(line);
  std::vector<double> vals;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ValidationError("not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw ValidationError("not a number: '" + tok + "'");
    vals.push_back(v);
  }
  return vals;
}

bool skip(const std::string& line) {
  const auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

void put_le(std::ostream& os, double v) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(u >> (8 * k));
  os.write(reinterpret_cast<const char*>(b), 8);
}

bool get_le(std::istream& is, double& v) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
  std::uint64_t u = 0;
  for (int k = 0; k < 8; ++k) u |= std::uint64_t(b[k]) << (8 * k);
  v = std::bit_cast<double>(u);
  return true;
}

}  // namespace

MatrixXd read_table(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (skip(line)) continue;
    rows.push_back(parse_line(line));
    if (rows.back().size() != rows.front().size()) throw ValidationError("ragged numeric table");
  }
  if (rows.empty()) return MatrixXd(0, 0);
  MatrixXd M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (!M.allFinite()) throw ValidationError("non-finite value in numeric table");
  return M;
}

MatrixXd read_table_file(const std::string& path) {
  auto is = open_in(path);
  return read_table(is);
}

PointSet read_points(std::istream& is) {
  const MatrixXd M = read_table(is);
  require(M.rows() > 0, "point file holds no points");
  require(M.cols() >= 1 && M.cols() <= 3, "points must have 1 to 3 coordinates");
  return PointSet(M.transpose());
}

PointSet read_points_file(const std::string& path) {
  auto is = open_in(path);
  return read_points(is);
}

template <typename Scalar>
Vector<Scalar> read_vector_file(const std::string& path, VectorFormat fmt) {
  constexpr int width = is_complex_v<Scalar> ? 2 : 1;
  std::vector<double> vals;
  if (fmt == VectorFormat::binary) {
    auto is = open_in(path, true);
    double v;
    while (get_le(is, v)) vals.push_back(v);
  } else {
    auto is = open_in(path);
    const MatrixXd M = read_table(is);
    require(M.size() == 0 || M.cols() == width, "vector file has the wrong number of columns");
    for (Index i = 0; i < M.rows(); ++i)
      for (Index j = 0; j < M.cols(); ++j) vals.push_back(M(i, j));
  }
  require(vals.size() % width == 0, "vector file length is not a multiple of the scalar width");
  Vector<Scalar> out(static_cast<Index>(vals.size() / width));
  for (Index i = 0; i < out.size(); ++i) {
    if constexpr (is_complex_v<Scalar>) out(i) = Scalar(vals[2 * i], vals[2 * i + 1]);
    else out(i) = vals[static_cast<std::size_t>(i)];
  }
  return out;
}

template <typename Scalar>
void write_vector_file(const std::string& path, const Vector<Scalar>& v, VectorFormat fmt) {
  std::ofstream os(path, fmt == VectorFormat::binary ? std::ios::binary : std::ios::out);
  if (!os) throw ValidationError("cannot write " + path);
  if (fmt == VectorFormat::binary) {
    for (Index i = 0; i < v.size(); ++i) {
      if constexpr (is_complex_v<Scalar>) {
        put_le(os, v(i).real());
        put_le(os, v(i).imag());
      } else {
        put_le(os, v(i));
      }
    }
    return;
  }
  os.precision(17);
  for (Index i = 0; i < v.size(); ++i) {
    if constexpr (is_complex_v<Scalar>) os << v(i).real() << ' ' << v(i).imag() << '\n';
    else os << v(i) << '\n';
  }
}

template Vector<double> read_vector_file(const std::string&, VectorFormat);
template Vector<complex> read_vector_file(const std::string&, VectorFormat);
template void write_vector_file(const std::string&, const Vector<double>&, VectorFormat);
template void write_vector_file(const std::string&, const Vector<complex>&, VectorFormat);

Index ExperimentReport::column(const std::string& col) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == col) return static_cast<Index>(k);
  return -1;
}

double ExperimentReport::number(std::size_t row, const std::string& col) const {
  const Index c = column(col);
  require(c >= 0 && row < rows.size(), "report: no cell " + col);
  const Cell& cell = rows[row][static_cast<std::size_t>(c)];
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  return std::numeric_limits<double>::quiet_NaN();
}

void ExperimentReport::add_row(std::vector<Cell> row) {
  require(row.size() == columns.size(), "report: row width does not match the columns");
  rows.push_back(std::move(row));
}

void write_csv(const ExperimentReport& r, std::ostream& os) {
  for (std::size_t k = 0; k < r.columns.size(); ++k) os << (k ? "," : "") << r.columns[k];
  os << '\n';
  std::ostringstream num;
  for (const auto& row : r.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              num.str("");
              num.precision(6);
              num << v;
              os << num.str();
            } else if constexpr (!std::is_same_v<T, std::monostate>) {
              os << v;
            }
          },
          row[k]);
    }
    os << '\n';
  }
}

void write_json(const ExperimentReport& r, std::ostream& os) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) obj[r.columns[k]] = nullptr;
            else obj[r.columns[k]] = v;
          },
          row[k]);
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::json doc{{"experiment", r.name}, {"columns", r.columns}, {"rows", rows}};
  os << doc.dump(2) << '\n';
}

void write_tree_json(const ClusterTree& tree, std::ostream& os) {
  nlohmann::json nodes = nlohmann::json::array();
  for (Index i = 0; i < tree.size(); ++i) {
    const TreeNode& nd = tree.node(i);
    std::vector<double> lo(nd.box.lo.data(), nd.box.lo.data() + nd.box.lo.size());
    std::vector<double> hi(nd.box.hi.data(), nd.box.hi.data() + nd.box.hi.size());
    nodes.push_back({{"id", i},
                     {"parent", nd.parent},
                     {"level", nd.level},
                     {"children", nd.children},
                     {"box", {{"lo", lo}, {"hi", hi}}},
                     {"rows", {nd.row_begin, nd.row_end}},
                     {"cols", {nd.col_begin, nd.col_end}}});
  }
  nlohmann::json doc{{"levels", tree.levels},
                     {"leaf_cap", tree.leaf_cap},
                     {"mode", tree.mode == Branching::binary ? "binary" : "two_to_d"},
                     {"row_perm", tree.row_perm},
                     {"col_perm", tree.col_perm},
                     {"nodes", nodes}};
  os << doc.dump(2) << '\n';
}

}  // namespace smash
