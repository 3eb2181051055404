#pragma once

#include <cstdint>

#include "tribound/system.hpp"

namespace tribound {

enum class ElimOrder : std::uint8_t { BFS, DFS };

struct EliminationOptions {
  ElimOrder order = ElimOrder::BFS;
  u64 split_cap = 10'000'000;  // IterationLimit beyond this many splits
};

// Back-substitute one advanced leaf: the leaf gains the children its class's
// branch dictates (direct p-child at shift-2, plus the m-node with three lift
// leaves on D1/D3).  Returns the new m-node's id, or -1 on a D2 split.
// The result is the pre-deletion tree.
std::int32_t split_leaf(IneqTree& tree, std::uint32_t leaf);

// Deletion rule for a freshly created m-node: each advanced child (shift
// beta'' >= 0) is removed when some p-node on the path from the root
// (root included, leaf excluded) has the same class and shift <= beta''.
// If no child survives, the m-node itself is removed (the minimization term
// is dropped wholesale, which only weakens the inequality).
void apply_deletion(IneqTree& tree, std::uint32_t mnode);

// Split advanced leaves until none remain.  BFS order is canonical (split all
// advanced leaves level by level, repeat); DFS order exists to confirm that
// the halt is order-independent.  Both produce the same tree.
IneqTree eliminate(IneqTree tree, const EliminationOptions& opts = {});

// D1/D2 trees pass through untouched; every D3 tree is eliminated.
System eliminate_system(int k, const EliminationOptions& opts = {});

// Streaming size probe for levels whose eliminated trees cannot be held in
// memory.  The depth bound comes first, from a beam search for a single deep
// root-to-node path (any path it returns is valid, so its depth is a true
// lower bound); the literal bound comes from a virtual depth-first traversal
// (per-class running-minimum shift stacks stand in for the ancestor walk)
// that stops early once both limits are exceeded.  Plain DFS alone cannot
// certify depth on the huge levels: the deep ladders hide behind billions of
// shallow siblings.  exhausted means the whole tree was enumerated, i.e.
// depth/literals are exact; otherwise both are lower bounds.
struct ProbeResult {
  int depth = 0;
  u64 literals = 0;
  bool exhausted = true;
};
ProbeResult probe_elimination(int k, u64 m, int depth_limit, u64 literal_limit);

}  // namespace tribound
