#include "tribound/shift.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tribound {
namespace {

// floor(alpha * 2^62) and floor + 1, so that for q > 0
//   p*2^62 + q*ALPHA_LO  <=  (p + q*alpha)*2^62  <=  p*2^62 + q*ALPHA_HI.
// The constants are checked against an exact power comparison in the tests.
// The products below stay under 2^127, so the bracket never overflows.
constexpr std::int64_t kScaleBits = 62;
constexpr std::int64_t kAlphaLo = 7309349404307464679LL;  // floor(log2(3) * 2^62)
constexpr std::int64_t kAlphaHi = kAlphaLo + 1;

template <class T>
int sign_of(T v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Exact comparison 3^q <> 2^-p; only for exponents small enough to write out.
int sign_exact(std::int64_t p, std::int64_t q) {
  if (q < 0) return -sign_exact(-p, -q);
  if (p >= 0) return 1;  // both summands nonnegative, q > 0
  mpz_t three_q, two_p;
  mpz_init(three_q);
  mpz_init_set_ui(two_p, 0);
  mpz_ui_pow_ui(three_q, 3, static_cast<unsigned long>(q));
  mpz_setbit(two_p, static_cast<mp_bitcnt_t>(-p));
  const int c = mpz_cmp(three_q, two_p);
  mpz_clear(three_q);
  mpz_clear(two_p);
  return sign_of(c);  // never 0: 2^-p = 3^q has no solution with q != 0
}

// Directed enclosure of p + q*alpha at growing precision.  0 means the
// enclosure still straddled zero at the highest precision tried.
int refine_sign(std::int64_t p, std::int64_t q) {
  int result = 0;
  for (mpfr_prec_t prec = 256; prec <= 4096 && result == 0; prec *= 2) {
    mpfr_t lo, hi;
    mpfr_inits2(prec, lo, hi, nullptr);
    mpfr_set_ui(lo, 3, MPFR_RNDN);
    mpfr_set_ui(hi, 3, MPFR_RNDN);
    mpfr_log2(lo, lo, q > 0 ? MPFR_RNDD : MPFR_RNDU);
    mpfr_log2(hi, hi, q > 0 ? MPFR_RNDU : MPFR_RNDD);
    mpfr_mul_si(lo, lo, q, MPFR_RNDD);
    mpfr_mul_si(hi, hi, q, MPFR_RNDU);
    mpfr_add_si(lo, lo, p, MPFR_RNDD);
    mpfr_add_si(hi, hi, p, MPFR_RNDU);
    if (mpfr_sgn(lo) > 0) result = 1;
    else if (mpfr_sgn(hi) < 0) result = -1;
    mpfr_clears(lo, hi, nullptr);
  }
  return result;
}

}  // namespace

int ExponentShift::sign() const {
  if (q == 0) return sign_of(p);
  const __int128 base = static_cast<__int128>(p) << kScaleBits;
  const __int128 lo = base + static_cast<__int128>(q) * (q > 0 ? kAlphaLo : kAlphaHi);
  const __int128 hi = base + static_cast<__int128>(q) * (q > 0 ? kAlphaHi : kAlphaLo);
  if (lo > 0) return 1;
  if (hi < 0) return -1;
  // The 62-bit bracket resolves everything the elimination trees produce;
  // adversarially near-zero combinations escalate.
  if (const int s = refine_sign(p, q)) return s;
  if (q > -(std::int64_t{1} << 20) && q < (std::int64_t{1} << 20)) return sign_exact(p, q);
  // Unreachable for log2(3) at int64 scale (its rational approximations are
  // nowhere near this good); refuse rather than guess.
  throw std::logic_error("ExponentShift::sign: undecided at 4096 bits");
}

double ExponentShift::value() const {
  return static_cast<double>(p) + static_cast<double>(q) * std::log2(3.0);
}

std::string ExponentShift::str() const {
  if (q == 0) return std::to_string(p);
  std::string s;
  if (q == -1) s = "-a";
  else if (q == 1) s = "a";
  else s = std::to_string(q) + "a";
  if (p > 0) s += "+" + std::to_string(p);
  else if (p < 0) s += std::to_string(p);
  return s;
}

}  // namespace tribound
