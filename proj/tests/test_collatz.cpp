#include <doctest.h>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "support/oracles.hpp"
#include "tribound/collatz.hpp"
#include "tribound/errors.hpp"

using namespace tribound;

TEST_CASE("pow3 exact values and range check") {
  CHECK(pow3(0) == 1);
  CHECK(pow3(1) == 3);
  CHECK(pow3(4) == 81);
  CHECK(pow3(40) == 12157665459056928801ULL);
  CHECK_THROWS_AS(pow3(41), std::invalid_argument);
  CHECK_THROWS_AS(pow3(-1), std::invalid_argument);
}

TEST_CASE("t_step on small values") {
  const std::vector<std::pair<u64, u64>> table = {
      {1, 2}, {2, 1}, {3, 5}, {4, 2}, {5, 8}, {6, 3}, {7, 11}, {8, 4}, {27, 41}};
  for (auto [n, tn] : table) {
    CHECK(t_step(n) == tn);
    CHECK(static_cast<u64>(t_step(static_cast<u128>(n))) == tn);
  }
  CHECK_THROWS_AS(t_step(u64{0}), std::invalid_argument);
  CHECK_THROWS_AS(t_step(~u64{0}), ArithmeticOverflow);  // odd, 3n+1 wraps
}

TEST_CASE("preimages invert t_step") {
  CHECK(preimages(1) == std::vector<u64>{2});
  CHECK(preimages(2) == std::vector<u64>{4, 1});
  CHECK(preimages(8) == std::vector<u64>{16, 5});
  CHECK(preimages(5) == std::vector<u64>{10, 3});
  for (u64 n = 1; n <= 500; ++n) {
    for (u64 p : preimages(n)) CHECK(t_step(p) == n);
  }
  // Completeness: every m <= 1000 with T(m) = n appears.
  for (u64 n = 1; n <= 200; ++n) {
    const std::vector<u64> pre = preimages(n);
    std::set<u64> got(pre.begin(), pre.end());
    for (u64 m = 1; m <= 1000; ++m) {
      if (t_step(m) == n) CHECK(got.count(m) == 1);
    }
  }
}

TEST_CASE("bounded count known values") {
  // n <= 4 reaching 2 without exceeding 4: {1, 2, 4}; 3 escapes to 5.
  CHECK(pi_a_star(2, 4) == 3);
  CHECK(pi_a_star(2, 1) == 0);  // a above the ceiling: nothing can reach it
  CHECK(pi_a_star(1, 1) == 1);
  CHECK(pi_a_star(5, 5) == 2);  // {5, 3}: 3 -> 5 stays at 5
  CHECK_THROWS_AS(pi_a_star(3, 100), std::invalid_argument);
  CHECK_THROWS_AS(pi_a_star(0, 100), std::invalid_argument);
}

TEST_CASE("orbit count known values") {
  CHECK(pi_a(1, 100) == 100);  // everything this small reaches 1
  CHECK(pi_a(2, 100) == 100);  // ... and then 2
  CHECK(pi_a(8, 16) == 13);    // all but {1, 2, 4}, which drop into the cycle
  CHECK(pi_a_star(8, 16) == 7);  // {8, 16, 5, 10, 3, 6, 12} stay below 16
  CHECK_THROWS_AS(pi_a(6, 10), std::invalid_argument);
}

TEST_CASE("bounded count never exceeds orbit count") {
  for (u64 a : {1, 2, 4, 5, 7, 8, 10, 11}) {
    for (u64 x : {1, 3, 10, 47, 200}) {
      CHECK(pi_a_star(a, x) <= pi_a(a, x));
    }
  }
}

TEST_CASE("bounded count matches the forward-scan oracle") {
  for (u64 a = 1; a <= 12; ++a) {
    if (a % 3 == 0) continue;
    for (u64 x : {1, 2, 5, 17, 100, 300}) {
      CAPTURE(a);
      CAPTURE(x);
      CHECK(pi_a_star(a, x) == oracle::pi_a_star_forward(a, x));
    }
  }
}

TEST_CASE("TrajectoryCounter validates and delegates") {
  TrajectoryCounter tc(2, 4);
  CHECK(tc.bounded_count() == 3);
  CHECK(tc.orbit_count() == 4);
  CHECK_THROWS_AS(TrajectoryCounter(9, 10), std::invalid_argument);
}

TEST_CASE("ResidueClass validation and index") {
  ResidueClass c(2, 5);
  CHECK(c.index() == 1);
  CHECK(ResidueClass(3, 26).index() == 8);
  CHECK_THROWS_AS(ResidueClass(2, 4), std::invalid_argument);   // 4 != 2 mod 3
  CHECK_THROWS_AS(ResidueClass(2, 11), std::invalid_argument);  // 11 >= 9
  CHECK_THROWS_AS(ResidueClass(0, 2), std::invalid_argument);
}

TEST_CASE("classify_branch k = 2 by hand") {
  // m = 2: branch D1, successor 8, lift (4m-2)/3 = 2 with lifts {2, 5, 8}.
  BranchInfo b2 = classify_branch(ResidueClass(2, 2));
  CHECK(b2.branch == Branch::D1);
  CHECK(b2.successor == 8);
  REQUIRE(b2.lift_base.has_value());
  CHECK(*b2.lift_base == 2);
  CHECK(b2.lifts == std::array<u64, 3>{2, 5, 8});
  CHECK(b2.min_shift == ExponentShift{-2, 1});  // alpha - 2

  // m = 5: branch D2, successor 20 mod 9 = 2, no lift.
  BranchInfo b5 = classify_branch(ResidueClass(2, 5));
  CHECK(b5.branch == Branch::D2);
  CHECK(b5.successor == 2);
  CHECK(!b5.lift_base.has_value());

  // m = 8: branch D3, successor 32 mod 9 = 5, lift (2m-1)/3 = 5 == 2 mod 3.
  BranchInfo b8 = classify_branch(ResidueClass(2, 8));
  CHECK(b8.branch == Branch::D3);
  CHECK(b8.successor == 5);
  REQUIRE(b8.lift_base.has_value());
  CHECK(*b8.lift_base == 2);
  CHECK(b8.lifts == std::array<u64, 3>{2, 5, 8});
  CHECK(b8.min_shift == ExponentShift{-1, 1});  // alpha - 1
}

TEST_CASE("classify_branch structural invariants across k") {
  for (int k = 2; k <= 5; ++k) {
    const u64 mod = pow3(k);
    for (u64 m = 2; m < mod; m += 3) {
      BranchInfo b = classify_branch(ResidueClass(k, m));
      CHECK(b.successor == 4 * m % mod);
      CHECK(b.successor % 3 == 2);
      switch (m % 9) {
        case 2:
          CHECK(b.branch == Branch::D1);
          REQUIRE(b.lift_base.has_value());
          CHECK(*b.lift_base == (4 * m - 2) / 3 % (mod / 3));
          break;
        case 5:
          CHECK(b.branch == Branch::D2);
          CHECK(!b.lift_base.has_value());
          break;
        case 8:
          CHECK(b.branch == Branch::D3);
          REQUIRE(b.lift_base.has_value());
          CHECK(*b.lift_base == (2 * m - 1) / 3 % (mod / 3));
          break;
      }
      if (b.lift_base) {
        for (int j = 0; j < 3; ++j) {
          CHECK(b.lifts[j] % 3 == 2);
          CHECK(b.lifts[j] % (mod / 3) == *b.lift_base);
          // Lifting then stepping once lands back on m's class family:
          // T((something = lifts[j]) ... ) structural check via index range.
          CHECK(b.lifts[j] < mod);
        }
      }
    }
  }
}
