#pragma once

// Internal directed-rounding arithmetic on top of MPFR, plus exact decimal
// string utilities (GMP rationals).  Not installed: public headers speak
// decimal strings and doubles only.

#include <mpfr.h>

#include <string>
#include <utility>

#include "tribound/shift.hpp"

namespace tribound::internal {

// Minimal RAII wrapper; every operation states its rounding mode explicitly.
class Big {
 public:
  explicit Big(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Big(const Big& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Big(Big&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  Big& operator=(const Big& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  Big& operator=(Big&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Big() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  void set(double d) { mpfr_set_d(v_, d, MPFR_RNDN); }  // exact: doubles embed
  void set_str(const std::string& s, mpfr_rnd_t rnd);
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int cmp(const Big& o) const { return mpfr_cmp(v_, o.v_); }
  int cmp_ui(unsigned long u) const { return mpfr_cmp_ui(v_, u); }

 private:
  mpfr_t v_;
};

// lambda^(p + q*alpha) with the stated rounding direction guaranteed
// (lambda >= 1, so the power is monotone in the exponent and the directed
// roundings compose).  Exact when the result is representable (lambda = 1, or
// q = 0 with small |p|).
Big pow_shift(const Big& lambda, ExponentShift s, mpfr_rnd_t rnd, mpfr_prec_t prec);

// Decimal string of v using exactly `frac_digits` fractional digits.
// Doubles round-trip exactly at frac_digits >= 52.
std::string decimal(const Big& v, int frac_digits = 55, mpfr_rnd_t rnd = MPFR_RNDN);
std::string decimal_of_double(double d);

// Exact comparison of two plain decimal strings ([-]ddd[.ddd]); no rounding.
int decimal_cmp(const std::string& a, const std::string& b);

bool valid_decimal(const std::string& s);

}  // namespace tribound::internal
