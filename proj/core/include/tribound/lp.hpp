#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tribound/shift.hpp"
#include "tribound/system.hpp"

namespace tribound {

enum class Family : std::uint8_t { NT, EL };

enum class VarRole : std::uint8_t {
  Principal,  // c^m, m in [3^k]
  LiftAux,    // cb^m, m in [3^{k-1}]: the three-way minimum, direct form
  TreeAux,    // a_i scoped to one tree: one per m-node
  Objective,  // C_max
};

struct VarId {
  VarRole role = VarRole::Principal;
  u64 cls = 0;        // Principal/LiftAux: the class representative
  u64 tree_cls = 0;   // TreeAux: root class of the owning tree
  std::uint32_t aux = 0;  // TreeAux: 1-based m-node index in BFS order

  friend bool operator==(const VarId&, const VarId&) = default;
  friend auto operator<=>(const VarId&, const VarId&) = default;
  std::string name() const;  // c^5, cb^2, a1@8, Cmax
};

// One term lambda^shift * var.
struct Term {
  VarId var;
  ExponentShift shift{};
  friend bool operator==(const Term&, const Term&) = default;
};

// lhs.var * lambda^lhs.shift <= sum of rhs terms.
struct LPConstraint {
  Term lhs;
  std::vector<Term> rhs;
  friend bool operator==(const LPConstraint&, const LPConstraint&) = default;
};

// Parametric program: minimize C_max subject to 1 <= c^m <= C_max for every
// principal variable plus the family's constraint rows.  Coefficients stay
// symbolic; only evaluate_coefficient ever turns a shift into a number.
struct LinearProgram {
  int k = 0;
  Family family = Family::NT;
  std::vector<VarId> variables;        // deterministic order
  std::vector<LPConstraint> constraints;
  std::vector<VarId> bounded;          // variables under 1 <= . <= C_max
};

// Direct form: branch rows per class plus the three lift rows per reduced
// class tying cb^m under each of its lifts.
LinearProgram build_lp_nt(int k);

// One constraint per leaf.  The unique leaf without an m-node on its root
// path yields the root row; every other leaf w is charged to the last m-node
// v0 on its path, with the m-nodes hanging off the segment below v0 on the
// right-hand side.
std::vector<LPConstraint> build_lp_from_tree(const IneqTree& tree);

LinearProgram build_lp_el(const System& eliminated);

// Writes one constraint per line: (var, p, q) <= (var, p, q) + ...
void emit_lp(const LinearProgram& lp, std::ostream& out);
std::string emit_lp(const LinearProgram& lp);

// lambda^(p + q*alpha) evaluated at the decimal lambda with the stated
// rounding direction guaranteed; returns a decimal string.
enum class Rounding : std::uint8_t { Down, Up };
std::string evaluate_coefficient(ExponentShift shift, const std::string& lambda, Rounding dir,
                                 unsigned precision_bits = 128);

}  // namespace tribound
