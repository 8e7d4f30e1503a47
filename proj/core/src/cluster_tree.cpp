#include "smash/cluster_tree.hpp"

#include <algorithm>
#include <functional>

namespace smash {

namespace {

constexpr int kMaxDepth = 64;

struct Builder {
  const PointSet& X;
  const PointSet& Y;
  const TreeOptions& opts;
  ClusterTree& tree;

  struct Part {
    Box box;
    IndexList rows, cols;
    int axis;
  };

  // Splits `box` along `axis` at the midpoint; points on the plane go low.
  std::pair<Part, Part> bisect(const Box& box, const IndexList& rows, const IndexList& cols,
                               int axis) const {
    const double mid = 0.5 * (box.lo(axis) + box.hi(axis));
    const int next = static_cast<int>((axis + 1) % box.dim());
    Part lo{box, {}, {}, next}, hi{box, {}, {}, next};
    lo.box.hi(axis) = mid;
    hi.box.lo(axis) = mid;
    for (Index r : rows) (X.coords(axis, r) <= mid ? lo.rows : hi.rows).push_back(r);
    for (Index c : cols) (Y.coords(axis, c) <= mid ? lo.cols : hi.cols).push_back(c);
    return {std::move(lo), std::move(hi)};
  }

  std::vector<Part> split(const Box& box, const IndexList& rows, const IndexList& cols,
                          int axis) const {
    std::vector<Part> out;
    if (opts.mode == Branching::binary) {
      Box cur = box;
      IndexList r = rows, c = cols;
      int ax = axis;
      for (int attempt = 0; attempt < kMaxDepth * static_cast<int>(box.dim()); ++attempt) {
        auto [lo, hi] = bisect(cur, r, c, ax);
        const bool lo_empty = lo.rows.empty() && lo.cols.empty();
        const bool hi_empty = hi.rows.empty() && hi.cols.empty();
        if (!lo_empty && !hi_empty) {
          out.push_back(std::move(lo));
          out.push_back(std::move(hi));
          return out;
        }
        Part& keep = lo_empty ? hi : lo;
        cur = keep.box;
        ax = keep.axis;
      }
      return out;  // coincident points: cannot be separated
    }
    const Index d = box.dim();
    const VectorXd mid = box.center();
    const Index nchild = Index{1} << d;
    std::vector<Part> parts(static_cast<std::size_t>(nchild));
    for (Index code = 0; code < nchild; ++code) {
      Part& p = parts[static_cast<std::size_t>(code)];
      p.box = box;
      p.axis = 0;
      for (Index k = 0; k < d; ++k) {
        if ((code >> k) & 1) p.box.lo(k) = mid(k);
        else p.box.hi(k) = mid(k);
      }
    }
    auto code_of = [&](const PointSet& P, Index i) {
      Index code = 0;
      for (Index k = 0; k < d; ++k)
        if (P.coords(k, i) > mid(k)) code |= Index{1} << k;
      return static_cast<std::size_t>(code);
    };
    for (Index r : rows) parts[code_of(X, r)].rows.push_back(r);
    for (Index c : cols) parts[code_of(Y, c)].cols.push_back(c);
    for (auto& p : parts)
      if (!p.rows.empty() || !p.cols.empty()) out.push_back(std::move(p));
    if (out.size() < 2 && box.radius() == 0.0) out.clear();
    return out;
  }

  Index build(const Box& box, const IndexList& rows, const IndexList& cols, int level, int axis,
              Index parent_slot) {
    TreeNode node;
    node.level = level;
    node.box = box;
    node.row_begin = static_cast<Index>(tree.row_perm.size());
    node.col_begin = static_cast<Index>(tree.col_perm.size());
    const Index big = std::max<Index>(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    std::vector<Part> parts;
    if (big > opts.leaf_cap && level < kMaxDepth) parts = split(box, rows, cols, axis);
    if (parts.empty()) {
      tree.row_perm.insert(tree.row_perm.end(), rows.begin(), rows.end());
      tree.col_perm.insert(tree.col_perm.end(), cols.begin(), cols.end());
    }
    for (auto& p : parts) node.children.push_back(build(p.box, p.rows, p.cols, level + 1, p.axis, -1));
    node.row_end = static_cast<Index>(tree.row_perm.size());
    node.col_end = static_cast<Index>(tree.col_perm.size());
    const Index id = static_cast<Index>(tree.nodes.size());
    for (Index c : node.children) tree.nodes[static_cast<std::size_t>(c)].parent = id;
    node.parent = parent_slot;
    tree.levels = std::max(tree.levels, level);
    tree.nodes.push_back(std::move(node));
    return id;
  }
};

}  // namespace

std::span<const Index> ClusterTree::rows(Index i) const {
  const TreeNode& n = node(i);
  return {row_perm.data() + n.row_begin, static_cast<std::size_t>(n.num_rows())};
}

std::span<const Index> ClusterTree::cols(Index i) const {
  const TreeNode& n = node(i);
  return {col_perm.data() + n.col_begin, static_cast<std::size_t>(n.num_cols())};
}

std::vector<IndexList> ClusterTree::by_level() const {
  std::vector<IndexList> out(static_cast<std::size_t>(levels) + 1);
  // Preorder traversal keeps each level in left-to-right order.
  std::function<void(Index)> visit = [&](Index i) {
    out[static_cast<std::size_t>(node(i).level)].push_back(i);
    for (Index c : node(i).children) visit(c);
  };
  if (!nodes.empty()) visit(root());
  return out;
}

IndexList ClusterTree::leaves() const {
  IndexList out;
  for (Index i = 0; i < size(); ++i)
    if (node(i).is_leaf()) out.push_back(i);
  return out;
}

bool ClusterTree::is_perfect() const {
  for (const auto& n : nodes)
    if (n.is_leaf() && n.level != levels) return false;
  return true;
}

bool ClusterTree::is_ancestor_or_self(Index a, Index i) const {
  for (; i >= 0; i = node(i).parent)
    if (i == a) return true;
  return false;
}

ClusterTree build_tree(const PointSet& X, const PointSet& Y, const TreeOptions& opts) {
  require(X.size() > 0 || Y.size() > 0, "build_tree: empty point set");
  require(opts.leaf_cap >= 1, "build_tree: leaf capacity must be positive");
  require(X.size() == 0 || Y.size() == 0 || X.dim() == Y.dim(),
          "build_tree: X and Y must share a dimension");
  for (const PointSet* s : {&X, &Y})
    require(s->coords.allFinite(), "build_tree: points must be finite");

  ClusterTree tree;
  tree.mode = opts.mode;
  tree.leaf_cap = opts.leaf_cap;
  Box root = opts.domain ? *opts.domain : Box::bounding(X, Y);
  require(root.dim() == (X.size() > 0 ? X.dim() : Y.dim()), "build_tree: domain dimension");
  for (const PointSet* s : {&X, &Y})
    for (Index i = 0; i < s->size(); ++i)
      require(root.contains(s->point(i)), "build_tree: point outside the domain box");

  IndexList rows(static_cast<std::size_t>(X.size())), cols(static_cast<std::size_t>(Y.size()));
  for (Index i = 0; i < X.size(); ++i) rows[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < Y.size(); ++i) cols[static_cast<std::size_t>(i)] = i;
  tree.row_perm.reserve(rows.size());
  tree.col_perm.reserve(cols.size());
  Builder b{X, Y, opts, tree};
  b.build(root, rows, cols, 1, 0, -1);
  return tree;
}

IndexList nearfield_set(const ClusterTree& tree, Index i, double tau) {
  require(i >= 0 && i < tree.size(), "nearfield_set: node not in tree");
  return nearfield_sets(tree, tau)[static_cast<std::size_t>(i)];
}

std::vector<IndexList> nearfield_sets(const ClusterTree& tree, double tau) {
  std::vector<IndexList> near(static_cast<std::size_t>(tree.size()));
  const auto levels = tree.by_level();
  auto sep = [&](Index a, Index b) { return well_separated(tree.node(a).box, tree.node(b).box, tau); };
  for (std::size_t l = 2; l < levels.size(); ++l) {
    for (Index i : levels[l]) {
      const Index p = tree.node(i).parent;
      IndexList& out = near[static_cast<std::size_t>(i)];
      for (Index k : tree.node(p).children)
        if (k != i && !sep(i, k)) out.push_back(k);
      for (Index m : near[static_cast<std::size_t>(p)]) {
        if (tree.node(m).is_leaf()) {
          if (!sep(i, m)) out.push_back(m);
        } else {
          for (Index k : tree.node(m).children)
            if (!sep(i, k)) out.push_back(k);
        }
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }
  return near;
}

LeafSets leaf_sets(const ClusterTree& tree, double tau, Structure structure) {
  LeafSets out;
  if (structure == Structure::hss) {
    for (const auto& n : tree.nodes)
      require(n.is_leaf() || n.children.size() == 2, "leaf_sets: HSS requires a binary tree");
    for (Index i = 0; i < tree.size(); ++i) {
      const TreeNode& n = tree.node(i);
      if (n.is_leaf()) out.inadmissible.emplace_back(i, i);
      for (Index a : n.children)
        for (Index b : n.children)
          if (a != b) out.admissible.emplace_back(a, b);
    }
  } else {
    std::function<void(Index, Index)> visit = [&](Index i, Index j) {
      const TreeNode& a = tree.node(i);
      const TreeNode& b = tree.node(j);
      if (well_separated(a.box, b.box, tau)) {
        out.admissible.emplace_back(i, j);
      } else if (a.is_leaf() && b.is_leaf()) {
        out.inadmissible.emplace_back(i, j);
      } else if (a.is_leaf()) {
        for (Index c : b.children) visit(i, c);
      } else if (b.is_leaf()) {
        for (Index c : a.children) visit(c, j);
      } else {
        for (Index ci : a.children)
          for (Index cj : b.children) visit(ci, cj);
      }
    };
    if (tree.size() > 0) visit(tree.root(), tree.root());
  }
  std::sort(out.admissible.begin(), out.admissible.end());
  std::sort(out.inadmissible.begin(), out.inadmissible.end());
  return out;
}

}  // namespace smash
