#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tribound/lp.hpp"

namespace tribound {

// A lambda value plus decimal assignments to the LP variables.  All numbers
// are plain decimal strings; lambda values produced by the solver are dyadic,
// so they parse back exactly at the stated precision.  Principal entries are
// normalized to minimum 1, making C_max the exact maximum entry.
struct Certificate {
  Family family = Family::NT;
  int k = 0;
  std::string lambda;
  unsigned precision_bits = 128;
  std::vector<std::string> principal;  // ascending class order
  std::map<std::pair<u64, std::uint32_t>, std::string> aux;  // EL: (tree class, index)
  bool verified = false;
};

// All-ones assignment at lambda = 1 (direct family; the derived-family
// counterpart is extend_certificate_nt_to_el of this).
Certificate trivial_certificate(int k);

// Exact maximum principal entry.
std::string certificate_cmax(const Certificate& cert);

void write_certificate(const Certificate& cert, std::ostream& out);
Certificate read_certificate(std::istream& in);
void save_certificate(const Certificate& cert, const std::string& path);
Certificate load_certificate(const std::string& path);

struct CheckResult {
  bool verified = false;
  std::size_t failed_constraint = 0;  // index into lp.constraints, or the
                                      // bound pseudo-row count offset
  std::string detail;                 // slack or bound description on failure
};

// Re-checks every constraint with coefficients rounded adversely (left side
// up, right side down) at the given precision; bound rows 1 <= c <= C_max are
// compared exactly on the decimal strings.  Missing direct-form lift
// auxiliaries are synthesized as the exact minimum over the three lifts.
// Throws MissingVariable if a tree auxiliary has no assignment.
CheckResult check_certificate(const LinearProgram& lp, const Certificate& cert,
                              unsigned precision_bits = 0);

// Same principal variables; each m-node auxiliary a_v gets a slightly shaded
// lower bound on lambda^{-beta(v)} * min over v's children of their chain
// values (leaf: lambda^{beta(w)} * c_w; inner node: sum of child chains),
// evaluated bottom-up with downward rounding.  Rows with a_v on the left hold
// for anything at or below the exact minimum; rows with a_v on the right keep
// the direct-family slack, which dwarfs the shading.  The result must pass
// check_certificate against the derived-family program; a failure there
// falsifies the transfer and must surface loudly.
Certificate extend_certificate_nt_to_el(const Certificate& cert_nt, const System& eliminated);

// Feasibility transfers one level up by repeating the vector across lifts:
// the level-(k+1) class m + j*3^k inherits the level-k value of m.
Certificate lift_certificate(const Certificate& cert);

}  // namespace tribound
