#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tribound/collatz.hpp"
#include "tribound/shift.hpp"

namespace tribound {

enum class NodeKind : std::uint8_t { P, M };

// One node of an inequality tree.  p-nodes carry a class mod 3^k, m-nodes the
// lifted class mod 3^{k-1} together with the shift shared by their children.
struct TreeNode {
  NodeKind kind = NodeKind::P;
  u64 cls = 0;
  ExponentShift shift{};
  std::int32_t parent = -1;
  std::vector<std::uint32_t> children;
};

struct ExpansionStats {
  int depth = 0;      // max m-nodes on any root-to-leaf path
  u64 literals = 0;   // leaf count
  friend bool operator==(const ExpansionStats&, const ExpansionStats&) = default;
};

// Rooted labelled tree encoding one difference inequality.  Nodes live in an
// arena; deletion unlinks a node from its parent and leaves the slot dead, so
// traversals always start from the root.  Child order is canonical: the
// direct p-child first, then the m-node; m-node children by lift index.
struct IneqTree {
  int k = 0;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& root() const { return nodes.front(); }
  bool is_leaf(std::uint32_t i) const {
    return nodes[i].kind == NodeKind::P && nodes[i].children.empty();
  }

  std::uint32_t add_node(NodeKind kind, u64 cls, ExponentShift shift, std::int32_t parent);
  void unlink_child(std::uint32_t parent, std::uint32_t child);

  // Reachable nodes in breadth-first order starting at the root.
  std::vector<std::uint32_t> bfs_order() const;
  // Reachable leaves in depth-first (preorder) visit order.
  std::vector<std::uint32_t> leaves_preorder() const;
};

ExpansionStats stats(const IneqTree& tree);

// Structural equality on the reachable part (labels, kinds, child order).
bool same_tree(const IneqTree& a, const IneqTree& b);

// Canonical text form, e.g. (tree 2 (p 8 0 0 (p 5 -2 0) (m 2 -1 1 ...))).
// Node fields are kind, class, shift p, shift q.
std::string serialize(const IneqTree& tree);
IneqTree parse_tree(const std::string& text);

}  // namespace tribound
