#ifndef SMASH_CLUSTER_TREE_HPP
#define SMASH_CLUSTER_TREE_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>

#include "smash/geometry.hpp"

namespace smash {

/// 2^d splits every dimension at once (H²); binary alternates one axis per level (HSS).
enum class Branching { two_to_d, binary };

enum class Structure { hss, h2 };

struct TreeOptions {
  Index leaf_cap = 50;
  Branching mode = Branching::binary;
  /// Root box; the bounding box of X ∪ Y when absent.
  std::optional<Box> domain;
};

struct TreeNode {
  Index parent = -1;
  int level = 1;
  IndexList children;
  Box box;
  /// Half-open ranges into the postorder permutations.
  Index row_begin = 0, row_end = 0;
  Index col_begin = 0, col_end = 0;

  bool is_leaf() const { return children.empty(); }
  Index num_rows() const { return row_end - row_begin; }
  Index num_cols() const { return col_end - col_begin; }
};

/// Nodes are numbered in postorder; the root is the last node.
class ClusterTree {
 public:
  Branching mode = Branching::binary;
  Index leaf_cap = 50;
  int levels = 0;
  std::vector<TreeNode> nodes;
  /// Permuted position -> original index.
  IndexList row_perm;
  IndexList col_perm;

  Index size() const { return static_cast<Index>(nodes.size()); }
  Index root() const { return size() - 1; }
  const TreeNode& node(Index i) const { return nodes[static_cast<std::size_t>(i)]; }
  Index num_rows() const { return static_cast<Index>(row_perm.size()); }
  Index num_cols() const { return static_cast<Index>(col_perm.size()); }

  std::span<const Index> rows(Index i) const;
  std::span<const Index> cols(Index i) const;

  /// Nodes at each level, left to right; entry 0 is unused.
  std::vector<IndexList> by_level() const;
  IndexList leaves() const;
  /// All leaves on the same level.
  bool is_perfect() const;
  bool is_ancestor_or_self(Index a, Index i) const;
};

ClusterTree build_tree(const PointSet& X, const PointSet& Y, const TreeOptions& opts);

/// Nearfield sets for every node (root gets the empty set), ascending order.
std::vector<IndexList> nearfield_sets(const ClusterTree& tree, double tau);
IndexList nearfield_set(const ClusterTree& tree, Index i, double tau);

using NodePair = std::pair<Index, Index>;

struct LeafSets {
  std::vector<NodePair> admissible;
  std::vector<NodePair> inadmissible;
};

LeafSets leaf_sets(const ClusterTree& tree, double tau, Structure structure);

void write_tree_json(const ClusterTree& tree, std::ostream& os);

}  // namespace smash

#endif
