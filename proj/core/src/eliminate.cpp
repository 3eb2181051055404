#include "tribound/eliminate.hpp"

#include <algorithm>

#include "tribound/errors.hpp"

namespace tribound {

std::int32_t split_leaf(IneqTree& tree, std::uint32_t leaf) {
  if (!tree.is_leaf(leaf)) throw std::invalid_argument("split_leaf: not a leaf");
  const TreeNode& node = tree.nodes[leaf];
  if (node.kind != NodeKind::P) throw std::invalid_argument("split_leaf: not a p-node");
  if (!node.shift.advanced()) throw std::invalid_argument("split_leaf: leaf is retarded");

  const BranchInfo info = classify_branch(ResidueClass(tree.k, node.cls));
  const ExponentShift base = node.shift;
  tree.add_node(NodeKind::P, info.successor, base + ExponentShift{-2, 0},
                static_cast<std::int32_t>(leaf));
  if (!info.lift_base) return -1;
  const ExponentShift mshift = base + info.min_shift;
  const auto mnode =
      tree.add_node(NodeKind::M, *info.lift_base, mshift, static_cast<std::int32_t>(leaf));
  for (u64 lift : info.lifts)
    tree.add_node(NodeKind::P, lift, mshift, static_cast<std::int32_t>(mnode));
  return static_cast<std::int32_t>(mnode);
}

void apply_deletion(IneqTree& tree, std::uint32_t mnode) {
  if (tree.nodes[mnode].kind != NodeKind::M)
    throw std::invalid_argument("apply_deletion: not an m-node");
  const auto kids = tree.nodes[mnode].children;  // copy: we unlink as we go
  for (auto child : kids) {
    const TreeNode& c = tree.nodes[child];
    if (!c.shift.advanced()) continue;  // rule only touches advanced children
    for (std::int32_t i = tree.nodes[mnode].parent; i >= 0; i = tree.nodes[i].parent) {
      const TreeNode& anc = tree.nodes[i];
      if (anc.kind == NodeKind::P && anc.cls == c.cls && anc.shift <= c.shift) {
        tree.unlink_child(mnode, child);
        break;
      }
    }
  }
  // Deep paths can knock out all three lifts at once (every lift class
  // already sits on the path at a lower shift).  Dropping the whole
  // minimization term only weakens the lower bound, so the m-node goes too
  // and the split leaf keeps just its direct child.
  if (tree.nodes[mnode].children.empty())
    tree.unlink_child(static_cast<std::uint32_t>(tree.nodes[mnode].parent), mnode);
}

namespace {

// Splits one leaf, prunes the new m-node, and reports the surviving advanced
// leaves in canonical child order.
std::vector<std::uint32_t> split_and_prune(IneqTree& tree, std::uint32_t leaf, u64& splits,
                                           u64 cap) {
  if (++splits > cap)
    throw IterationLimit("eliminate: split cap exceeded (k too large for full expansion?)");
  const auto mnode = split_leaf(tree, leaf);
  if (mnode >= 0) apply_deletion(tree, static_cast<std::uint32_t>(mnode));
  std::vector<std::uint32_t> fresh;
  for (auto c : tree.nodes[leaf].children) {
    if (tree.nodes[c].kind == NodeKind::P) {
      if (tree.nodes[c].shift.advanced()) fresh.push_back(c);
    } else {
      for (auto l : tree.nodes[c].children)
        if (tree.nodes[l].shift.advanced()) fresh.push_back(l);
    }
  }
  return fresh;
}

}  // namespace

IneqTree eliminate(IneqTree tree, const EliminationOptions& opts) {
  // The base tree's own m-node is subject to the rule before any splitting.
  for (auto i : tree.bfs_order())
    if (tree.nodes[i].kind == NodeKind::M) apply_deletion(tree, i);

  u64 splits = 0;
  if (opts.order == ElimOrder::BFS) {
    while (true) {
      std::vector<std::uint32_t> frontier;
      for (auto i : tree.bfs_order())
        if (tree.is_leaf(i) && tree.nodes[i].shift.advanced()) frontier.push_back(i);
      if (frontier.empty()) break;
      for (auto leaf : frontier) split_and_prune(tree, leaf, splits, opts.split_cap);
    }
  } else {
    std::vector<std::uint32_t> stack;
    for (auto i : tree.bfs_order())
      if (tree.is_leaf(i) && tree.nodes[i].shift.advanced()) stack.push_back(i);
    std::reverse(stack.begin(), stack.end());
    while (!stack.empty()) {
      const auto leaf = stack.back();
      stack.pop_back();
      const auto fresh = split_and_prune(tree, leaf, splits, opts.split_cap);
      for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) stack.push_back(*it);
    }
  }
  return tree;
}

System eliminate_system(int k, const EliminationOptions& opts) {
  System sys = build_system(k);
  for (auto& tree : sys.trees)
    if (tree.root().cls % 9 == 8) tree = eliminate(std::move(tree), opts);
  return sys;
}

namespace {

// Beam search for one deep valid path.  Moves mirror the traversal exactly:
// interior nodes stay advanced, and an advanced lift child whose class
// already appears on the path must lie strictly below that class's floor
// (the running minimum, which direct entries lower too).  Any path found is
// a real root-to-node path of the eliminated tree, so the returned lift-edge
// depth is a true lower bound.  Gives up once the beam dies out or the depth
// target is exceeded.
int deep_path_depth(const std::vector<std::uint32_t>& succ,
                    const std::vector<std::uint8_t>& branch,
                    const std::vector<std::array<std::uint32_t, 3>>& lifts, std::uint32_t root,
                    int stop_above) {
  const std::size_t n = succ.size();
  const std::size_t width =
      std::max<std::size_t>(256, std::min<std::size_t>(4096, (std::size_t{1} << 22) / n));
  const ExponentShift unvisited{1'000'000'000, 0};  // above any reachable value

  struct State {
    std::vector<ExponentShift> floor;
    ExponentShift value;
    std::uint32_t cls;
    int mdepth;
  };
  std::vector<State> cur, next;
  cur.push_back(State{std::vector<ExponentShift>(n, unvisited), {0, 0}, root, 0});
  cur[0].floor[root] = {0, 0};

  int best = 0;
  const int level_cap = stop_above < (1 << 20) ? 8 * stop_above + 64 : (1 << 23);
  for (int level = 0; level < level_cap && !cur.empty() && best <= stop_above; ++level) {
    next.clear();
    for (const State& s : cur) {
      if (branch[s.cls] != 1) {
        const ExponentShift d =
            s.value + (branch[s.cls] == 0 ? ExponentShift{-2, 1} : ExponentShift{-1, 1});
        for (const std::uint32_t c : lifts[s.cls]) {
          if (d.retarded()) {
            best = std::max(best, s.mdepth + 1);  // retarded lift leaf
            break;                                // same shift for all three
          }
          if (s.floor[c] <= d) continue;  // deleted
          State t = s;
          t.cls = c;
          t.value = d;
          t.mdepth = s.mdepth + 1;
          t.floor[c] = d;
          best = std::max(best, t.mdepth);
          next.push_back(std::move(t));
        }
      }
      const ExponentShift d = s.value + ExponentShift{-2, 0};
      if (!d.retarded()) {
        State t = s;
        t.cls = succ[s.cls];
        t.value = d;
        if (d < t.floor[t.cls]) t.floor[t.cls] = d;
        next.push_back(std::move(t));
      }
    }
    if (next.size() > width) {
      std::nth_element(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(width),
                       next.end(), [](const State& a, const State& b) {
                         if (a.mdepth != b.mdepth) return a.mdepth > b.mdepth;
                         return b.value < a.value;
                       });
      next.resize(width);
    }
    cur.swap(next);
  }
  return best;
}

}  // namespace

ProbeResult probe_elimination(int k, u64 m, int depth_limit, u64 literal_limit) {
  const u64 n = pow3(k - 1);
  (void)ResidueClass(k, m);  // validate inputs

  // Per-class successor/branch/lift tables, indexed by (cls - 2) / 3.
  std::vector<std::uint32_t> succ(n);
  std::vector<std::uint8_t> branch(n);  // 0 = D1, 1 = D2, 2 = D3
  std::vector<std::array<std::uint32_t, 3>> lifts(n);
  for (u64 i = 0; i < n; ++i) {
    const BranchInfo info = classify_branch(ResidueClass(k, 3 * i + 2));
    succ[i] = static_cast<std::uint32_t>((info.successor - 2) / 3);
    branch[i] = static_cast<std::uint8_t>((3 * i + 2) % 9 / 3);
    if (info.lift_base)
      for (int j = 0; j < 3; ++j) lifts[i][j] = static_cast<std::uint32_t>((info.lifts[j] - 2) / 3);
  }

  const int witness =
      deep_path_depth(succ, branch, lifts, static_cast<std::uint32_t>((m - 2) / 3), depth_limit);

  // Running minimum shift of the p-nodes of each class on the current path.
  std::vector<std::vector<ExponentShift>> floor_stack(n);

  struct Frame {
    std::uint32_t idx;
    ExponentShift shift;
    int mdepth;
    std::uint8_t next = 0;  // 0..2 = lift children, 3 = direct child, 4 = done
  };

  ProbeResult out;
  std::vector<Frame> stack;
  stack.reserve(1 << 12);

  auto enter = [&](std::uint32_t idx, ExponentShift shift, int mdepth) {
    // Retarded nodes are leaves of the eliminated tree.
    if (shift.retarded()) {
      ++out.literals;
      out.depth = std::max(out.depth, mdepth);
      return;
    }
    auto& fs = floor_stack[idx];
    fs.push_back(fs.empty() || shift < fs.back() ? shift : fs.back());
    stack.push_back(Frame{idx, shift, mdepth});
  };

  enter(static_cast<std::uint32_t>((m - 2) / 3), {0, 0}, 0);
  while (!stack.empty()) {
    if (out.literals > literal_limit && std::max(out.depth, witness) > depth_limit) {
      out.depth = std::max(out.depth, witness);
      out.exhausted = false;
      break;
    }
    Frame& f = stack.back();
    const std::uint8_t br = branch[f.idx];
    if (f.next < 3) {
      // m-node children first: depth accumulates along these edges.
      if (br == 1) {
        f.next = 3;
        continue;
      }
      const ExponentShift ms = f.shift + (br == 0 ? ExponentShift{-2, 1} : ExponentShift{-1, 1});
      const std::uint32_t child = lifts[f.idx][f.next];
      ++f.next;
      if (ms.advanced()) {
        const auto& fs = floor_stack[child];
        if (!fs.empty() && fs.back() <= ms) continue;  // deleted
      }
      enter(child, ms, f.mdepth + 1);
    } else if (f.next == 3) {
      f.next = 4;
      enter(succ[f.idx], f.shift + ExponentShift{-2, 0}, f.mdepth);
    } else {
      floor_stack[f.idx].pop_back();
      stack.pop_back();
    }
  }
  return out;
}

}  // namespace tribound
