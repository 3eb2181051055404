#include "real.hpp"

#include <gmp.h>

#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace tribound::internal {

void Big::set_str(const std::string& s, mpfr_rnd_t rnd) {
  if (!valid_decimal(s)) throw std::invalid_argument("Big::set_str: not a plain decimal: " + s);
  if (mpfr_set_str(v_, s.c_str(), 10, rnd) != 0)
    throw std::invalid_argument("Big::set_str: unparsable: " + s);
}

Big pow_shift(const Big& lambda, ExponentShift s, mpfr_rnd_t rnd, mpfr_prec_t prec) {
  if (mpfr_cmp_ui(lambda.raw(), 1) < 0)
    throw std::invalid_argument("pow_shift: lambda must be >= 1");
  Big out(prec);
  if (s.q == 0 && s.p == 0) {
    mpfr_set_ui(out.raw(), 1, rnd);
    return out;
  }
  // Exponent t = p + q*alpha, rounded the same way the result must go:
  // lambda >= 1 makes lambda^t nondecreasing in t.
  Big t(prec + 32);
  if (s.q == 0) {
    mpfr_set_si(t.raw(), s.p, rnd);
  } else {
    mpfr_set_ui(t.raw(), 3, MPFR_RNDN);
    mpfr_log2(t.raw(), t.raw(), s.q > 0 ? rnd : mpfr_rnd_t(rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD));
    mpfr_mul_si(t.raw(), t.raw(), s.q, rnd);
    mpfr_add_si(t.raw(), t.raw(), s.p, rnd);
  }
  mpfr_pow(out.raw(), lambda.raw(), t.raw(), rnd);
  return out;
}

std::string decimal(const Big& v, int frac_digits, mpfr_rnd_t rnd) {
  char* buf = nullptr;
  if (mpfr_asprintf(&buf, "%.*R*f", frac_digits, rnd, v.raw()) < 0)
    throw std::runtime_error("decimal: mpfr_asprintf failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string decimal_of_double(double d) {
  Big b(64);
  b.set(d);
  return decimal(b);
}

bool valid_decimal(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  std::size_t digits = 0, dots = 0;
  for (; i < s.size(); ++i) {
    if (s[i] >= '0' && s[i] <= '9') ++digits;
    else if (s[i] == '.') ++dots;
    else return false;
  }
  return digits > 0 && dots <= 1;
}

int decimal_cmp(const std::string& a, const std::string& b) {
  // Parse [-]int[.frac] into an exact rational digits/10^len(frac).
  auto to_q = [](const std::string& s, mpq_t q) {
    std::string digits;
    std::size_t frac = 0;
    bool neg = false, seen_dot = false;
    for (char ch : s) {
      if (ch == '-') neg = true;
      else if (ch == '+') continue;
      else if (ch == '.') seen_dot = true;
      else {
        digits += ch;
        if (seen_dot) ++frac;
      }
    }
    if (digits.empty()) throw std::invalid_argument("decimal_cmp: not a decimal: " + s);
    mpz_set_str(mpq_numref(q), digits.c_str(), 10);
    if (neg) mpz_neg(mpq_numref(q), mpq_numref(q));
    mpz_ui_pow_ui(mpq_denref(q), 10, frac);
    mpq_canonicalize(q);
  };
  if (!valid_decimal(a) || !valid_decimal(b))
    throw std::invalid_argument("decimal_cmp: not a decimal");
  mpq_t qa, qb;
  mpq_init(qa);
  mpq_init(qb);
  to_q(a, qa);
  to_q(b, qb);
  int c = mpq_cmp(qa, qb);
  mpq_clear(qa);
  mpq_clear(qb);
  return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

}  // namespace tribound::internal
