#include "tribound/lp.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "real.hpp"
#include "tribound/errors.hpp"

namespace tribound {

std::string VarId::name() const {
  switch (role) {
    case VarRole::Principal: return "c^" + std::to_string(cls);
    case VarRole::LiftAux: return "cb^" + std::to_string(cls);
    case VarRole::TreeAux: return "a" + std::to_string(aux) + "@" + std::to_string(tree_cls);
    case VarRole::Objective: return "Cmax";
  }
  return "?";
}

namespace {

VarId principal(u64 m) { return {VarRole::Principal, m, 0, 0}; }
VarId lift_aux(u64 m) { return {VarRole::LiftAux, m, 0, 0}; }

}  // namespace

LinearProgram build_lp_nt(int k) {
  if (k < 2) throw std::invalid_argument("build_lp_nt: k must be >= 2");
  LinearProgram lp;
  lp.k = k;
  lp.family = Family::NT;
  for (u64 m : classes(k)) {
    lp.variables.push_back(principal(m));
    lp.bounded.push_back(principal(m));
  }
  for (u64 m : classes(k - 1)) lp.variables.push_back(lift_aux(m));
  lp.variables.push_back({VarRole::Objective});

  for (u64 m : classes(k)) {
    const BranchInfo info = classify_branch(ResidueClass(k, m));
    LPConstraint row;
    row.lhs = {principal(m), {0, 0}};
    row.rhs.push_back({principal(info.successor), {-2, 0}});
    if (info.lift_base) row.rhs.push_back({lift_aux(*info.lift_base), info.min_shift});
    lp.constraints.push_back(std::move(row));
  }
  // cb^m <= c^(m + j*3^{k-1}) for each lift.
  const u64 sub = pow3(k - 1);
  for (u64 m : classes(k - 1))
    for (int j = 0; j < 3; ++j)
      lp.constraints.push_back({{lift_aux(m), {0, 0}},
                                {{principal((m + j * sub) % pow3(k)), {0, 0}}}});
  return lp;
}

std::vector<LPConstraint> build_lp_from_tree(const IneqTree& tree) {
  // 1-based m-node indices in BFS order; the auxiliary a_i belongs to m-node i.
  std::map<std::uint32_t, std::uint32_t> aux_of;
  for (auto i : tree.bfs_order())
    if (tree.nodes[i].kind == NodeKind::M)
      aux_of.emplace(i, static_cast<std::uint32_t>(aux_of.size() + 1));

  const u64 root_cls = tree.root().cls;
  auto var_of_mnode = [&](std::uint32_t i) -> VarId {
    return {VarRole::TreeAux, tree.nodes[i].cls, root_cls, aux_of.at(i)};
  };

  std::vector<LPConstraint> rows;
  for (auto leaf : tree.leaves_preorder()) {
    if (tree.nodes[leaf].kind != NodeKind::P)
      throw MalformedTree("build_lp_from_tree: m-node leaf");
    // Path from root to leaf; find the last m-node v0 on it.
    std::vector<std::uint32_t> path;
    for (std::int32_t i = static_cast<std::int32_t>(leaf); i >= 0; i = tree.nodes[i].parent)
      path.push_back(static_cast<std::uint32_t>(i));
    std::reverse(path.begin(), path.end());
    std::int32_t v0 = -1;
    for (auto i : path)
      if (tree.nodes[i].kind == NodeKind::M) v0 = static_cast<std::int32_t>(i);

    LPConstraint row;
    row.lhs = v0 < 0 ? Term{principal(root_cls), {0, 0}}
                     : Term{var_of_mnode(static_cast<std::uint32_t>(v0)),
                            tree.nodes[static_cast<std::uint32_t>(v0)].shift};
    row.rhs.push_back({principal(tree.nodes[leaf].cls), tree.nodes[leaf].shift});
    // m-nodes hanging off the p-nodes of the terminal segment below v0.
    bool past_v0 = v0 < 0;
    for (auto i : path) {
      if (!past_v0) {
        past_v0 = static_cast<std::int32_t>(i) == v0;
        continue;
      }
      if (tree.nodes[i].kind != NodeKind::P) continue;
      for (auto c : tree.nodes[i].children)
        if (tree.nodes[c].kind == NodeKind::M)
          row.rhs.push_back({var_of_mnode(c), tree.nodes[c].shift});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

LinearProgram build_lp_el(const System& eliminated) {
  LinearProgram lp;
  lp.k = eliminated.k;
  lp.family = Family::EL;
  for (u64 m : classes(lp.k)) {
    lp.variables.push_back(principal(m));
    lp.bounded.push_back(principal(m));
  }
  for (const auto& tree : eliminated.trees) {
    std::uint32_t aux = 0;
    for (auto i : tree.bfs_order())
      if (tree.nodes[i].kind == NodeKind::M)
        lp.variables.push_back({VarRole::TreeAux, tree.nodes[i].cls, tree.root().cls, ++aux});
    auto rows = build_lp_from_tree(tree);
    lp.constraints.insert(lp.constraints.end(), std::make_move_iterator(rows.begin()),
                          std::make_move_iterator(rows.end()));
  }
  lp.variables.push_back({VarRole::Objective});
  return lp;
}

void emit_lp(const LinearProgram& lp, std::ostream& out) {
  auto term = [&](const Term& t) {
    out << '(' << t.var.name() << ", " << t.shift.p << ", " << t.shift.q << ')';
  };
  for (const auto& row : lp.constraints) {
    term(row.lhs);
    out << " <= ";
    for (std::size_t i = 0; i < row.rhs.size(); ++i) {
      if (i) out << " + ";
      term(row.rhs[i]);
    }
    out << '\n';
  }
}

std::string emit_lp(const LinearProgram& lp) {
  std::ostringstream out;
  emit_lp(lp, out);
  return out.str();
}

std::string evaluate_coefficient(ExponentShift shift, const std::string& lambda, Rounding dir,
                                 unsigned precision_bits) {
  using internal::Big;
  const mpfr_rnd_t rnd = dir == Rounding::Down ? MPFR_RNDD : MPFR_RNDU;
  // lambda^t is increasing in lambda for t >= 0 and decreasing for t < 0, so
  // when the decimal is not exactly representable the safe end of its
  // enclosure depends on the exponent's sign.
  const bool lam_down = (shift.sign() >= 0) == (dir == Rounding::Down);
  Big lam(precision_bits);
  lam.set_str(lambda, lam_down ? MPFR_RNDD : MPFR_RNDU);
  if (lam.cmp_ui(1) < 0 || lam.cmp_ui(2) > 0)
    throw std::invalid_argument("evaluate_coefficient: lambda must lie in [1, 2]");
  return internal::decimal(internal::pow_shift(lam, shift, rnd, precision_bits), 55, rnd);
}

}  // namespace tribound
