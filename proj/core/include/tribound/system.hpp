#pragma once

#include <vector>

#include "tribound/tree.hpp"

namespace tribound {

// The inequality system for one level: one tree per class in [3^k],
// ascending by class representative.
struct System {
  int k = 0;
  std::vector<IneqTree> trees;

  const IneqTree& tree_for(u64 m) const { return trees.at((m - 2) / 3); }
};

// All classes of [3^k], ascending: 2, 5, 8, ...
std::vector<u64> classes(int k);

// The base difference inequality for one class as a tree: root (m, 0), direct
// p-child (4m mod 3^k, -2), and on D1/D3 an m-node at shift alpha-2 / alpha-1
// carrying the three lifts of the reduced class.
IneqTree build_base_tree(int k, u64 m);

System build_system(int k);

}  // namespace tribound
