#include "smash/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace smash {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'M', 'A', 'S', 'H', 'H', 'M', '\0'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void u8(std::uint8_t v) { os_.put(static_cast<char>(v)); }
  void u64(std::uint64_t v) {
    char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<char>(v >> (8 * k));
    os_.write(b, 8);
  }
  void i64(Index v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void scalar(double v) { f64(v); }
  void scalar(complex v) {
    f64(v.real());
    f64(v.imag());
  }
  void list(const IndexList& v) {
    i64(static_cast<Index>(v.size()));
    for (Index x : v) i64(x);
  }
  void vec(const VectorXd& v) {
    i64(v.size());
    for (Index k = 0; k < v.size(); ++k) f64(v(k));
  }
  template <typename Scalar>
  void matrix(const Matrix<Scalar>& M) {
    i64(M.rows());
    i64(M.cols());
    for (Index j = 0; j < M.cols(); ++j)
      for (Index i = 0; i < M.rows(); ++i) scalar(M(i, j));
  }

 private:
  std::ostream& os_;
};

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  std::uint8_t u8() {
    char c;
    if (!is_.get(c)) fail();
    return static_cast<std::uint8_t>(c);
  }
  std::uint64_t u64() {
    unsigned char b[8];
    if (!is_.read(reinterpret_cast<char*>(b), 8)) fail();
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t(b[k]) << (8 * k);
    return v;
  }
  Index i64() { return static_cast<Index>(u64()); }
  Index count() {
    const Index n = i64();
    if (n < 0 || n > (Index{1} << 40)) throw ValidationError("container: corrupt length field");
    return n;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  template <typename Scalar>
  Scalar scalar() {
    if constexpr (is_complex_v<Scalar>) {
      const double re = f64();
      return {re, f64()};
    } else {
      return f64();
    }
  }
  IndexList list() {
    IndexList v(static_cast<std::size_t>(count()));
    for (Index& x : v) x = i64();
    return v;
  }
  VectorXd vec() {
    VectorXd v(count());
    for (Index k = 0; k < v.size(); ++k) v(k) = f64();
    return v;
  }
  template <typename Scalar>
  Matrix<Scalar> matrix() {
    const Index r = count(), c = count();
    Matrix<Scalar> M(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) M(i, j) = scalar<Scalar>();
    return M;
  }

 private:
  [[noreturn]] static void fail() { throw ValidationError("container: unexpected end of data"); }
  std::istream& is_;
};

ContainerInfo read_header(Reader& r) {
  std::array<char, 8> magic{};
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (magic != kMagic) throw ValidationError("container: bad magic");
  const auto version = static_cast<std::uint32_t>(r.u64());
  if (version != kVersion) throw ValidationError("container: unsupported version");
  ContainerInfo info{};
  const auto st = r.u8();
  if (st > 1) throw ValidationError("container: bad structure tag");
  info.structure = st == 0 ? Structure::hss : Structure::h2;
  const auto sc = r.u8();
  if (sc > 1) throw ValidationError("container: bad scalar tag");
  info.complex_scalar = sc == 1;
  return info;
}

template <typename Scalar>
void write_blocks(Writer& w, const std::vector<Block<Scalar>>& blocks) {
  w.i64(static_cast<Index>(blocks.size()));
  for (const auto& b : blocks) {
    w.i64(b.row_node);
    w.i64(b.col_node);
    w.u8(b.materialized ? 1 : 0);
    if (b.materialized) w.matrix(b.data);
  }
}

template <typename Scalar>
std::vector<Block<Scalar>> read_blocks(Reader& r, Index nodes) {
  std::vector<Block<Scalar>> blocks(static_cast<std::size_t>(r.count()));
  for (auto& b : blocks) {
    b.row_node = r.i64();
    b.col_node = r.i64();
    if (b.row_node < 0 || b.row_node >= nodes || b.col_node < 0 || b.col_node >= nodes)
      throw ValidationError("container: block node out of range");
    b.materialized = r.u8() != 0;
    if (b.materialized) b.data = r.matrix<Scalar>();
  }
  return blocks;
}

}  // namespace

template <typename Scalar>
void save(const HMatrix<Scalar>& h, std::ostream& os) {
  Writer w(os);
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u64(kVersion);
  w.u8(h.structure == Structure::hss ? 0 : 1);
  w.u8(is_complex_v<Scalar> ? 1 : 0);

  const ClusterTree& T = *h.tree;
  w.u8(T.mode == Branching::binary ? 0 : 1);
  w.i64(T.leaf_cap);
  w.i64(T.levels);
  w.i64(T.size());
  for (const auto& nd : T.nodes) {
    w.i64(nd.parent);
    w.i64(nd.level);
    w.list(nd.children);
    w.vec(nd.box.lo);
    w.vec(nd.box.hi);
    w.i64(nd.row_begin);
    w.i64(nd.row_end);
    w.i64(nd.col_begin);
    w.i64(nd.col_end);
  }
  w.list(T.row_perm);
  w.list(T.col_perm);

  const BuildParams& p = h.params;
  w.u8(p.expansion.kind == Expansion::taylor ? 0 : 1);
  w.i64(p.expansion.order);
  w.f64(p.tau);
  w.f64(p.svd_tol);
  w.f64(p.s);
  w.f64(p.compr_tol);
  w.list(IndexList(p.level_orders.begin(), p.level_orders.end()));

  for (const auto* bases : {&h.row_basis, &h.col_basis}) {
    for (const auto& F : *bases) {
      w.i64(F.m);
      w.i64(F.k);
      w.u8(F.is_dense ? 1 : 0);
      if (F.is_dense) {
        w.matrix(F.dense);
      } else {
        w.list(F.skeleton_pos);
        w.list(F.redundant_pos);
        w.matrix(F.G);
        w.list(F.skeleton);
      }
    }
  }
  write_blocks(w, h.couplings);
  write_blocks(w, h.nearfield);
  if (!os) throw ValidationError("container: write failed");
}

template <typename Scalar>
HMatrix<Scalar> load(std::istream& is, std::shared_ptr<const Kernel<Scalar>> kernel) {
  Reader r(is);
  const ContainerInfo info = read_header(r);
  if (info.complex_scalar != is_complex_v<Scalar>) throw ValidationError("container: scalar type mismatch");

  auto tree = std::make_shared<ClusterTree>();
  tree->mode = r.u8() == 0 ? Branching::binary : Branching::two_to_d;
  tree->leaf_cap = r.i64();
  tree->levels = static_cast<int>(r.i64());
  tree->nodes.resize(static_cast<std::size_t>(r.count()));
  for (auto& nd : tree->nodes) {
    nd.parent = r.i64();
    nd.level = static_cast<int>(r.i64());
    nd.children = r.list();
    nd.box.lo = r.vec();
    nd.box.hi = r.vec();
    nd.row_begin = r.i64();
    nd.row_end = r.i64();
    nd.col_begin = r.i64();
    nd.col_end = r.i64();
  }
  tree->row_perm = r.list();
  tree->col_perm = r.list();
  const Index N = tree->size();
  if (N == 0) throw ValidationError("container: empty tree");
  for (const auto& nd : tree->nodes) {
    if (nd.parent >= N || nd.row_begin < 0 || nd.row_end > tree->num_rows() || nd.col_begin < 0 ||
        nd.col_end > tree->num_cols() || nd.row_begin > nd.row_end || nd.col_begin > nd.col_end)
      throw ValidationError("container: corrupt tree");
    for (Index c : nd.children)
      if (c < 0 || c >= N) throw ValidationError("container: corrupt tree");
  }

  HMatrix<Scalar> h;
  h.structure = info.structure;
  h.tree = tree;
  h.kernel = kernel;
  h.params.expansion.kind = r.u8() == 0 ? Expansion::taylor : Expansion::chebyshev;
  h.params.expansion.order = static_cast<int>(r.i64());
  h.params.tau = r.f64();
  h.params.svd_tol = r.f64();
  h.params.s = r.f64();
  h.params.compr_tol = r.f64();
  for (Index o : r.list()) h.params.level_orders.push_back(static_cast<int>(o));

  for (auto* bases : {&h.row_basis, &h.col_basis}) {
    bases->resize(static_cast<std::size_t>(N));
    for (auto& F : *bases) {
      F.m = r.i64();
      F.k = r.i64();
      F.is_dense = r.u8() != 0;
      if (F.is_dense) {
        F.dense = r.matrix<Scalar>();
        if (F.dense.rows() != F.m || F.dense.cols() != F.k) throw ValidationError("container: corrupt basis");
      } else {
        F.skeleton_pos = r.list();
        F.redundant_pos = r.list();
        F.G = r.matrix<Scalar>();
        F.skeleton = r.list();
        if (static_cast<Index>(F.skeleton_pos.size()) != F.k ||
            static_cast<Index>(F.skeleton_pos.size() + F.redundant_pos.size()) != F.m || F.G.rows() != F.m - F.k ||
            (F.G.size() > 0 && F.G.cols() != F.k))
          throw ValidationError("container: corrupt basis");
        for (Index q : F.skeleton_pos)
          if (q < 0 || q >= F.m) throw ValidationError("container: corrupt basis");
        for (Index q : F.redundant_pos)
          if (q < 0 || q >= F.m) throw ValidationError("container: corrupt basis");
      }
    }
  }
  h.couplings = read_blocks<Scalar>(r, N);
  h.nearfield = read_blocks<Scalar>(r, N);
  if (kernel) {
    require(kernel->rows() == tree->num_rows() && kernel->cols() == tree->num_cols(),
            "container: kernel size does not match the saved matrix");
  }
  return h;
}

template <typename Scalar>
void save_file(const HMatrix<Scalar>& h, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + path);
  save(h, os);
}

template <typename Scalar>
HMatrix<Scalar> load_file(const std::string& path, std::shared_ptr<const Kernel<Scalar>> kernel) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path);
  return load<Scalar>(is, std::move(kernel));
}

ContainerInfo peek(std::istream& is) {
  Reader r(is);
  return read_header(r);
}

template void save(const HMatrix<double>&, std::ostream&);
template void save(const HMatrix<complex>&, std::ostream&);
template HMatrix<double> load(std::istream&, std::shared_ptr<const Kernel<double>>);
template HMatrix<complex> load(std::istream&, std::shared_ptr<const Kernel<complex>>);
template void save_file(const HMatrix<double>&, const std::string&);
template void save_file(const HMatrix<complex>&, const std::string&);
template HMatrix<double> load_file(const std::string&, std::shared_ptr<const Kernel<double>>);
template HMatrix<complex> load_file(const std::string&, std::shared_ptr<const Kernel<complex>>);

}  // namespace smash
