#include "tribound/system.hpp"

namespace tribound {

std::vector<u64> classes(int k) {
  std::vector<u64> out;
  out.reserve(pow3(k - 1));
  for (u64 m = 2; m < pow3(k); m += 3) out.push_back(m);
  return out;
}

IneqTree build_base_tree(int k, u64 m) {
  const ResidueClass cls(k, m);  // validates k >= 1, m in [3^k]
  if (k < 2) throw std::invalid_argument("build_base_tree: k must be >= 2");
  const BranchInfo info = classify_branch(cls);

  IneqTree t;
  t.k = k;
  const auto root = t.add_node(NodeKind::P, m, {0, 0}, -1);
  t.add_node(NodeKind::P, info.successor, {-2, 0}, static_cast<std::int32_t>(root));
  if (info.lift_base) {
    const auto mnode = t.add_node(NodeKind::M, *info.lift_base, info.min_shift,
                                  static_cast<std::int32_t>(root));
    for (u64 lift : info.lifts)
      t.add_node(NodeKind::P, lift, info.min_shift, static_cast<std::int32_t>(mnode));
  }
  return t;
}

System build_system(int k) {
  System sys;
  sys.k = k;
  for (u64 m : classes(k)) sys.trees.push_back(build_base_tree(k, m));
  return sys;
}

}  // namespace tribound
