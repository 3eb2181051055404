#include "tribound/certificate.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "real.hpp"
#include "tribound/errors.hpp"

namespace tribound {

using internal::Big;
using internal::decimal_cmp;

Certificate trivial_certificate(int k) {
  Certificate c;
  c.family = Family::NT;
  c.k = k;
  c.lambda = "1";
  c.principal.assign(pow3(k - 1), "1");
  return c;
}

std::string certificate_cmax(const Certificate& cert) {
  if (cert.principal.empty()) throw std::invalid_argument("certificate_cmax: empty certificate");
  std::string best = cert.principal.front();
  for (const auto& v : cert.principal)
    if (decimal_cmp(v, best) > 0) best = v;
  return best;
}

void write_certificate(const Certificate& cert, std::ostream& out) {
  out << "tribound-certificate v1\n";
  out << "family " << (cert.family == Family::NT ? "nt" : "el") << '\n';
  out << "k " << cert.k << '\n';
  out << "lambda " << cert.lambda << '\n';
  out << "precision-bits " << cert.precision_bits << '\n';
  out << "status " << (cert.verified ? "verified" : "unverified") << '\n';
  out << "principal " << cert.principal.size() << '\n';
  const auto cls = classes(cert.k);
  for (std::size_t i = 0; i < cert.principal.size(); ++i)
    out << "c " << cls.at(i) << ' ' << cert.principal[i] << '\n';
  out << "aux " << cert.aux.size() << '\n';
  for (const auto& [key, val] : cert.aux)
    out << "a " << key.first << ' ' << key.second << ' ' << val << '\n';
  out << "end\n";
}

Certificate read_certificate(std::istream& in) {
  auto fail = [](const std::string& why) -> std::runtime_error {
    return std::runtime_error("read_certificate: " + why);
  };
  std::string line;
  if (!std::getline(in, line) || line != "tribound-certificate v1") throw fail("bad header");
  Certificate cert;
  std::size_t n_principal = 0, n_aux = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "end") {
      if (cert.principal.size() != n_principal || cert.aux.size() != n_aux)
        throw fail("entry count mismatch");
      return cert;
    } else if (key == "family") {
      std::string fam;
      ls >> fam;
      if (fam != "nt" && fam != "el") throw fail("bad family");
      cert.family = fam == "nt" ? Family::NT : Family::EL;
    } else if (key == "k") {
      ls >> cert.k;
    } else if (key == "lambda") {
      ls >> cert.lambda;
    } else if (key == "precision-bits") {
      ls >> cert.precision_bits;
    } else if (key == "status") {
      std::string st;
      ls >> st;
      cert.verified = st == "verified";
    } else if (key == "principal") {
      ls >> n_principal;
    } else if (key == "aux") {
      ls >> n_aux;
    } else if (key == "c") {
      u64 cls;
      std::string val;
      ls >> cls >> val;
      if (!internal::valid_decimal(val)) throw fail("bad decimal");
      cert.principal.push_back(val);
    } else if (key == "a") {
      u64 tree_cls;
      std::uint32_t idx;
      std::string val;
      ls >> tree_cls >> idx >> val;
      if (!internal::valid_decimal(val)) throw fail("bad decimal");
      cert.aux[{tree_cls, idx}] = val;
    } else if (!key.empty()) {
      throw fail("unknown key: " + key);
    }
    if (ls.fail()) throw fail("malformed line: " + line);
  }
  throw fail("missing end marker");
}

void save_certificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_certificate: cannot open " + path);
  write_certificate(cert, out);
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_certificate: cannot open " + path);
  return read_certificate(in);
}

namespace {

// Decimal value of one variable under the certificate (exact synthesis for
// the direct-form lift minimum and for C_max).
std::string value_of(const VarId& var, const Certificate& cert) {
  switch (var.role) {
    case VarRole::Principal: {
      const auto idx = (var.cls - 2) / 3;
      if (idx >= cert.principal.size()) throw MissingVariable("no value for " + var.name());
      return cert.principal[idx];
    }
    case VarRole::LiftAux: {
      const u64 sub = pow3(cert.k - 1);
      std::string best;
      for (int j = 0; j < 3; ++j) {
        const u64 lift = (var.cls + j * sub) % pow3(cert.k);
        const auto& v = cert.principal.at((lift - 2) / 3);
        if (best.empty() || decimal_cmp(v, best) < 0) best = v;
      }
      return best;
    }
    case VarRole::TreeAux: {
      auto it = cert.aux.find({var.tree_cls, var.aux});
      if (it == cert.aux.end()) throw MissingVariable("no value for " + var.name());
      return it->second;
    }
    case VarRole::Objective:
      return certificate_cmax(cert);
  }
  throw MissingVariable("no value for " + var.name());
}

}  // namespace

CheckResult check_certificate(const LinearProgram& lp, const Certificate& cert,
                              unsigned precision_bits) {
  if (lp.k != cert.k) throw std::invalid_argument("check_certificate: level mismatch");
  if (cert.principal.size() != pow3(cert.k - 1))
    throw MissingVariable("check_certificate: principal vector has wrong length");
  const mpfr_prec_t prec = precision_bits ? precision_bits : cert.precision_bits;

  // lambda as an enclosure; solver lambdas are dyadic, so it collapses.
  Big lam_lo(prec), lam_hi(prec);
  lam_lo.set_str(cert.lambda, MPFR_RNDD);
  lam_hi.set_str(cert.lambda, MPFR_RNDU);
  if (lam_lo.cmp_ui(1) < 0 || lam_hi.cmp_ui(2) > 0)
    throw std::invalid_argument("check_certificate: lambda must lie in [1, 2]");

  auto coeff = [&](ExponentShift s, bool up) {
    // Monotone in lambda with the exponent's sign; take the adverse end.
    const bool big_lambda = (s.sign() >= 0) == up;
    return internal::pow_shift(big_lambda ? lam_hi : lam_lo, s, up ? MPFR_RNDU : MPFR_RNDD, prec);
  };

  CheckResult res;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& row = lp.constraints[i];
    Big lhs(prec);
    lhs.set_str(value_of(row.lhs.var, cert), MPFR_RNDU);
    mpfr_mul(lhs.raw(), lhs.raw(), coeff(row.lhs.shift, true).raw(), MPFR_RNDU);

    Big rhs(prec), term(prec);
    for (const auto& t : row.rhs) {
      term.set_str(value_of(t.var, cert), MPFR_RNDD);
      mpfr_mul(term.raw(), term.raw(), coeff(t.shift, false).raw(), MPFR_RNDD);
      mpfr_add(rhs.raw(), rhs.raw(), term.raw(), MPFR_RNDD);
    }
    if (lhs.cmp(rhs) > 0) {
      mpfr_sub(lhs.raw(), lhs.raw(), rhs.raw(), MPFR_RNDU);
      res.failed_constraint = i;
      res.detail = "slack " + internal::decimal(lhs, 55, MPFR_RNDU);
      return res;
    }
  }
  // Bound rows, exact on the decimal strings.
  const std::string cmax = certificate_cmax(cert);
  for (std::size_t i = 0; i < lp.bounded.size(); ++i) {
    const std::string v = value_of(lp.bounded[i], cert);
    if (decimal_cmp(v, "1") < 0 || decimal_cmp(v, cmax) > 0) {
      res.failed_constraint = lp.constraints.size() + i;
      res.detail = "bound violated for " + lp.bounded[i].name();
      return res;
    }
  }
  res.verified = true;
  return res;
}

Certificate extend_certificate_nt_to_el(const Certificate& cert_nt, const System& eliminated) {
  if (cert_nt.family != Family::NT)
    throw std::invalid_argument("extend_certificate_nt_to_el: source must be direct-form");
  if (cert_nt.k != eliminated.k)
    throw std::invalid_argument("extend_certificate_nt_to_el: level mismatch");
  if (cert_nt.principal.size() != pow3(cert_nt.k - 1))
    throw MissingVariable("extend_certificate_nt_to_el: principal vector has wrong length");
  Certificate out = cert_nt;
  out.family = Family::EL;
  out.verified = false;
  out.aux.clear();

  const mpfr_prec_t prec = std::max<unsigned>(cert_nt.precision_bits, 64);
  Big lam_lo(prec), lam_hi(prec);
  lam_lo.set_str(cert_nt.lambda, MPFR_RNDD);
  lam_hi.set_str(cert_nt.lambda, MPFR_RNDU);
  if (lam_lo.cmp_ui(1) < 0 || lam_hi.cmp_ui(2) > 0)
    throw std::invalid_argument("extend_certificate_nt_to_el: lambda must lie in [1, 2]");
  // Lower bound on lambda^s over the lambda enclosure.
  auto coeff_lo = [&](ExponentShift s) {
    return internal::pow_shift(s.sign() < 0 ? lam_hi : lam_lo, s, MPFR_RNDD, prec);
  };
  // Auxiliaries get a hair of slack below their exact optimum so that the
  // otherwise-tight rows survive the checker's directed rounding.
  Big shade(prec);
  mpfr_set_ui_2exp(shade.raw(), 1, -40, MPFR_RNDN);
  mpfr_ui_sub(shade.raw(), 1, shade.raw(), MPFR_RNDD);

  // An auxiliary's block pins lambda^beta(v) * a_v to the cheapest branch
  // below v, where a branch costs its value chain: the leaf term at the end
  // of the direct spine plus the (already assigned) auxiliaries hanging off
  // it.  Assign bottom-up, always using the value as stored, so the checker
  // reconstructs the same numbers.
  for (const auto& tree : eliminated.trees) {
    const std::vector<std::uint32_t> order = tree.bfs_order();
    std::vector<std::uint32_t> pos(tree.nodes.size(), 0);
    for (std::size_t j = 0; j < order.size(); ++j) pos[order[j]] = static_cast<std::uint32_t>(j);
    std::uint32_t next_aux = 0;
    std::vector<std::uint32_t> aux_id(tree.nodes.size(), 0);
    for (std::uint32_t id : order) {
      if (tree.nodes[id].kind == NodeKind::M) aux_id[id] = ++next_aux;
    }
    std::vector<Big> chain(order.size(), Big(prec));
    for (std::size_t j = order.size(); j-- > 0;) {
      const TreeNode& nd = tree.nodes[order[j]];
      Big& v = chain[j];
      if (nd.children.empty()) {
        Big c(prec);
        c.set_str(cert_nt.principal.at((nd.cls - 2) / 3), MPFR_RNDD);
        v = coeff_lo(nd.shift);
        mpfr_mul(v.raw(), v.raw(), c.raw(), MPFR_RNDD);
      } else if (nd.kind == NodeKind::P) {
        mpfr_set_zero(v.raw(), 1);
        for (std::uint32_t ch : nd.children) mpfr_add(v.raw(), v.raw(), chain[pos[ch]].raw(), MPFR_RNDD);
      } else {
        std::size_t best = pos[nd.children.front()];
        for (std::uint32_t ch : nd.children) {
          if (chain[pos[ch]].cmp(chain[best]) < 0) best = pos[ch];
        }
        Big a = coeff_lo(ExponentShift{-nd.shift.p, -nd.shift.q});
        mpfr_mul(a.raw(), a.raw(), chain[best].raw(), MPFR_RNDD);
        mpfr_mul(a.raw(), a.raw(), shade.raw(), MPFR_RNDD);
        const std::string dec = internal::decimal(a, 55, MPFR_RNDD);
        out.aux[{tree.root().cls, aux_id[order[j]]}] = dec;
        // This node's contribution to its parent is what the checker will
        // recompute from the stored decimal, not the pre-shade optimum.
        Big stored(prec);
        stored.set_str(dec, MPFR_RNDD);
        v = coeff_lo(nd.shift);
        mpfr_mul(v.raw(), v.raw(), stored.raw(), MPFR_RNDD);
      }
    }
  }
  return out;
}

Certificate lift_certificate(const Certificate& cert) {
  if (cert.family != Family::NT)
    throw std::invalid_argument("lift_certificate: only direct-form certificates lift");
  Certificate out = cert;
  out.k = cert.k + 1;
  out.verified = false;
  out.principal.clear();
  const u64 mod = pow3(cert.k);
  for (u64 m : classes(out.k)) out.principal.push_back(cert.principal.at((m % mod - 2) / 3));
  return out;
}

}  // namespace tribound
