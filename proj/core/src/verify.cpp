#include "tribound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "real.hpp"
#include "tribound/errors.hpp"

namespace tribound {

using internal::Big;

namespace {
constexpr u64 kHeadlineBudget = 10'000'000;
}

BoundCheckReport check_lower_bound(u64 a, const Certificate& cert, int y_max) {
  if (a == 1 || a == 2) throw CycleTarget("check_lower_bound: a is in the cycle {1, 2}");
  if (a % 3 != 2) throw std::invalid_argument("check_lower_bound: a must be 2 mod 3");
  if (!cert.verified)
    throw std::invalid_argument("check_lower_bound: certificate must be verified first");
  if (cert.principal.size() != pow3(cert.k - 1))
    throw std::invalid_argument("check_lower_bound: bad certificate shape");
  if (y_max < 0 || y_max > 40) throw std::invalid_argument("check_lower_bound: y_max out of range");
  if (a > (u64{1} << 20)) throw std::invalid_argument("check_lower_bound: a too large");
  if ((a << y_max) > u64{100'000'000})
    throw BudgetExceeded("check_lower_bound: 2^y_max * a exceeds the counting budget");

  const mpfr_prec_t prec = std::max<unsigned>(cert.precision_bits, 64);
  // Everything on the right side rounds up, so pass means the true bound held.
  Big delta(prec);
  delta.set_str(certificate_cmax(cert), MPFR_RNDD);
  mpfr_mul_ui(delta.raw(), delta.raw(), 4, MPFR_RNDD);
  mpfr_ui_div(delta.raw(), 1, delta.raw(), MPFR_RNDU);

  Big lam(prec);
  lam.set_str(cert.lambda, MPFR_RNDU);
  Big base(prec);
  base.set_str(cert.principal.at((a % pow3(cert.k) - 2) / 3), MPFR_RNDU);
  mpfr_mul(base.raw(), base.raw(), delta.raw(), MPFR_RNDU);

  BoundCheckReport rep;
  rep.a = a;
  rep.k = cert.k;
  rep.lambda = cert.lambda;
  rep.delta1 = internal::decimal(delta, 30, MPFR_RNDU);
  rep.pass = true;

  Big rhs(prec), lp(prec);
  for (int y = 0; y <= y_max; ++y) {
    BoundRow row;
    row.y = y;
    row.x = a << y;
    row.lhs = pi_a_star(a, row.x);
    mpfr_set_si(lp.raw(), y, MPFR_RNDN);
    mpfr_pow(rhs.raw(), lam.raw(), lp.raw(), MPFR_RNDU);
    mpfr_mul(rhs.raw(), rhs.raw(), base.raw(), MPFR_RNDU);
    row.rhs = internal::decimal(rhs, 30, MPFR_RNDU);
    row.pass = mpfr_cmp_ui(rhs.raw(), static_cast<unsigned long>(row.lhs)) <= 0;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

HeadlineReport check_headline_bound(const std::vector<u64>& x_values) {
  HeadlineReport rep;
  rep.pass = true;
  for (u64 x : x_values) {
    if (x == 0 || x > kHeadlineBudget)
      throw BudgetExceeded("check_headline_bound: x exceeds the 10^7 desk budget");
    HeadlineRow row;
    row.x = x;
    row.count = pi_a(1, x);
    row.bound = std::pow(static_cast<double>(x), 0.84);
    row.pass = static_cast<double>(row.count) >= row.bound;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

std::string format_csv(const BoundCheckReport& report) {
  std::ostringstream out;
  out << "a,k,lambda,delta1\n"
      << report.a << ',' << report.k << ',' << report.lambda << ',' << report.delta1 << '\n';
  out << "y,x,count,bound,pass\n";
  for (const auto& r : report.rows) {
    out << r.y << ',' << r.x << ',' << r.lhs << ',' << r.rhs << ',' << (r.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string format_csv(const HeadlineReport& report) {
  std::ostringstream out;
  out << "x,count,bound,pass\n";
  for (const auto& r : report.rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", r.bound);
    out << r.x << ',' << r.count << ',' << buf << ',' << (r.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace tribound
