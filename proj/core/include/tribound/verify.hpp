#pragma once

#include <string>
#include <vector>

#include "tribound/certificate.hpp"
#include "tribound/collatz.hpp"

namespace tribound {

struct BoundRow {
  int y = 0;
  u64 x = 0;          // floor(2^y * a)
  u64 lhs = 0;        // pi_a_star(a, x)
  std::string rhs;    // Delta1 * c^(a mod 3^k) * lambda^y, rounded up
  bool pass = false;  // lhs >= rhs
};

struct BoundCheckReport {
  u64 a = 0;
  int k = 0;
  std::string lambda;
  std::string delta1;  // 1 / (4 * C_max), rounded up
  std::vector<BoundRow> rows;
  bool pass = false;
};

// Checks the certified growth bound against exact bounded-trajectory counts:
// for y = 0..y_max, pi_a_star(floor(2^y a)) >= Delta1 * c * lambda^y.  The
// right side is rounded up throughout, so a pass is meaningful.
BoundCheckReport check_lower_bound(u64 a, const Certificate& cert, int y_max);

struct HeadlineRow {
  u64 x = 0;
  u64 count = 0;   // pi_1(x)
  double bound = 0;  // x^0.84
  bool pass = false;
};

struct HeadlineReport {
  std::vector<HeadlineRow> rows;
  bool pass = false;
};

// pi_1(x) >= x^0.84 checked by direct iteration (x capped at 10^7).
HeadlineReport check_headline_bound(const std::vector<u64>& x_values);

std::string format_csv(const BoundCheckReport& report);
std::string format_csv(const HeadlineReport& report);

}  // namespace tribound
