#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tribound/errors.hpp"
#include "tribound/shift.hpp"

namespace tribound {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// 3^k for small k (fits u64 up to k = 40).
u64 pow3(int k);

// T(n) = n/2 for even n, (3n+1)/2 for odd n.  Checked: throws
// ArithmeticOverflow rather than wrapping.
u128 t_step(u128 n);
u64 t_step(u64 n);

// Preimages of n under T: {2n} plus (2n-1)/3 when n == 2 (mod 3).
std::vector<u64> preimages(u64 n);

// #{n <= x : some forward iterate of n equals a with every iterate along the
// way <= x}.  Backward breadth-first search from a over preimages, pruning
// anything above x; a itself counts when a <= x.
u64 pi_a_star(u64 a, u64 x);

// #{n <= x : the forward orbit of n visits a}.  Memoized forward iteration;
// a trajectory that revisits a value without having hit a is off a's orbit
// (the only cycle in range is {1, 2}).  Throws BudgetExceeded when a single
// trajectory exceeds max_steps without resolving.
u64 pi_a(u64 a, u64 x, u64 max_steps = 100000);

// The two counting functions bundled with their validated parameters.
struct TrajectoryCounter {
  u64 a;
  u64 x;
  TrajectoryCounter(u64 a_, u64 x_);

  u64 bounded_count() const { return pi_a_star(a, x); }          // pi_a_star
  u64 orbit_count(u64 max_steps = 100000) const { return pi_a(a, x, max_steps); }
};

// Residue class m mod 3^k with m == 2 (mod 3); the classes the difference
// system ranges over.  Class index (m-2)/3 runs over [0, 3^{k-1}).
struct ResidueClass {
  int k;
  u64 m;
  ResidueClass(int k_, u64 m_);

  u64 index() const { return (m - 2) / 3; }
};

enum class Branch : std::uint8_t { D1, D2, D3 };  // m mod 9 = 2, 5, 8

struct BranchInfo {
  Branch branch;
  u64 successor;  // 4m mod 3^k, again == 2 (mod 3)
  // D1/D3 only: the class driving the three-way minimum.
  std::optional<u64> lift_base;            // mod 3^{k-1}
  std::array<u64, 3> lifts{};              // lift_base + j*3^{k-1}, mod 3^k
  ExponentShift min_shift{};               // alpha-2 for D1, alpha-1 for D3
};

// Branch data for one class: successor 4m mod 3^k and, on D1/D3, the lifted
// class (4m-2)/3 resp. (2m-1)/3 mod 3^{k-1} with its three lifts.
BranchInfo classify_branch(const ResidueClass& c);

}  // namespace tribound
