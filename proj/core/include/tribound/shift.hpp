#pragma once

#include <cstdint>
#include <string>

namespace tribound {

// A time shift of the form p + q*alpha with alpha = log2(3).  Every shift the
// pipeline ever produces is an integer combination of the step contributions
// -2, alpha-2 and alpha-1, so the (p, q) pair represents the value exactly and
// equality is pair equality (alpha is irrational).  Ordering is decided
// exactly as well: a fast __int128 bracket of alpha handles essentially every
// comparison, with an exact big-integer comparison of 3^q against 2^-p as the
// fallback, so no fixed-precision float ever decides a tie.
struct ExponentShift {
  std::int64_t p = 0;
  std::int64_t q = 0;

  friend bool operator==(const ExponentShift&, const ExponentShift&) = default;

  constexpr ExponentShift operator+(ExponentShift o) const { return {p + o.p, q + o.q}; }
  constexpr ExponentShift operator-(ExponentShift o) const { return {p - o.p, q - o.q}; }

  // Exact sign of p + q*alpha: -1, 0, +1.  Zero only for p = q = 0.
  int sign() const;

  bool advanced() const { return sign() >= 0; }   // shift >= 0
  bool retarded() const { return sign() < 0; }    // shift <  0

  bool operator<(ExponentShift o) const { return (*this - o).sign() < 0; }
  bool operator<=(ExponentShift o) const { return (*this - o).sign() <= 0; }

  // Approximate numeric value; display only, never used for decisions.
  double value() const;

  // Human-readable form such as "0", "-2", "a-2", "2a-5".
  std::string str() const;
};

}  // namespace tribound
