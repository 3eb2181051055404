#include "tribound/collatz.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace tribound {

u64 pow3(int k) {
  if (k < 0 || k > 40) throw std::invalid_argument("pow3: k out of range");
  u64 r = 1;
  while (k--) r *= 3;
  return r;
}

u128 t_step(u128 n) {
  if (n == 0) throw std::invalid_argument("t_step: n must be positive");
  if (n % 2 == 0) return n / 2;
  if (n > (std::numeric_limits<u128>::max() - 1) / 3)
    throw ArithmeticOverflow("t_step: 3n+1 exceeds 128-bit range");
  return (3 * n + 1) / 2;
}

u64 t_step(u64 n) {
  u128 r = t_step(static_cast<u128>(n));
  if (r > std::numeric_limits<u64>::max())
    throw ArithmeticOverflow("t_step: result exceeds 64-bit range");
  return static_cast<u64>(r);
}

std::vector<u64> preimages(u64 n) {
  if (n == 0) throw std::invalid_argument("preimages: n must be positive");
  if (n > std::numeric_limits<u64>::max() / 2)
    throw ArithmeticOverflow("preimages: 2n exceeds 64-bit range");
  std::vector<u64> out{2 * n};
  if (n % 3 == 2) out.push_back((2 * n - 1) / 3);  // odd preimage, always >= 1
  return out;
}

u64 pi_a_star(u64 a, u64 x) {
  if (a == 0 || a % 3 == 0) throw std::invalid_argument("pi_a_star: need a >= 1, a not divisible by 3");
  if (x < a) return 0;
  std::unordered_set<u64> seen{a};
  std::vector<u64> frontier{a};
  while (!frontier.empty()) {
    std::vector<u64> next;
    for (u64 v : frontier) {
      for (u64 p : preimages(v)) {
        if (p <= x && seen.insert(p).second) next.push_back(p);
      }
    }
    frontier = std::move(next);
  }
  return seen.size();
}

namespace {

enum class Reach : std::uint8_t { Unknown = 0, Yes, No };

}  // namespace

u64 pi_a(u64 a, u64 x, u64 max_steps) {
  if (a == 0 || a % 3 == 0) throw std::invalid_argument("pi_a: need a >= 1, a not divisible by 3");
  if (x == 0) return 0;
  // memo[v] for v <= x; larger intermediate values are carried but not cached.
  std::vector<Reach> memo(static_cast<std::size_t>(x) + 1, Reach::Unknown);
  if (a <= x) memo[a] = Reach::Yes;

  u64 count = 0;
  std::vector<u64> path;  // values <= x touched by the current trajectory
  for (u64 n = 1; n <= x; ++n) {
    if (memo[n] != Reach::Unknown) {
      if (memo[n] == Reach::Yes) ++count;
      continue;
    }
    path.clear();
    std::unordered_set<u128> seen_here;
    u128 v = n;
    Reach verdict = Reach::Unknown;
    for (u64 step = 0;; ++step) {
      if (step >= max_steps)
        throw BudgetExceeded("pi_a: trajectory exceeded step budget");
      if (v == a) { verdict = Reach::Yes; break; }
      if (v <= x) {
        Reach r = memo[static_cast<std::size_t>(v)];
        if (r != Reach::Unknown) { verdict = r; break; }
        path.push_back(static_cast<u64>(v));
      }
      if (!seen_here.insert(v).second) { verdict = Reach::No; break; }  // cycled without hitting a
      v = t_step(v);
    }
    for (u64 w : path) memo[w] = verdict;
    if (verdict == Reach::Yes) ++count;
  }
  return count;
}

TrajectoryCounter::TrajectoryCounter(u64 a_, u64 x_) : a(a_), x(x_) {
  if (a == 0 || a % 3 == 0)
    throw std::invalid_argument("TrajectoryCounter: need a >= 1, a not divisible by 3");
}

ResidueClass::ResidueClass(int k_, u64 m_) : k(k_), m(m_) {
  if (k < 1) throw std::invalid_argument("ResidueClass: k must be >= 1");
  if (m % 3 != 2 || m >= pow3(k))
    throw std::invalid_argument("ResidueClass: m must satisfy m == 2 (mod 3), m < 3^k");
}

BranchInfo classify_branch(const ResidueClass& c) {
  if (c.k < 2) throw std::invalid_argument("classify_branch: k must be >= 2");
  const u64 mod = pow3(c.k);
  const u64 sub = pow3(c.k - 1);
  BranchInfo info;
  info.successor = (4 * c.m) % mod;
  switch (c.m % 9) {
    case 2: {
      info.branch = Branch::D1;
      info.lift_base = ((4 * c.m - 2) / 3) % sub;
      info.min_shift = {-2, 1};  // alpha - 2
      break;
    }
    case 5:
      info.branch = Branch::D2;
      return info;
    case 8: {
      info.branch = Branch::D3;
      info.lift_base = ((2 * c.m - 1) / 3) % sub;
      info.min_shift = {-1, 1};  // alpha - 1
      break;
    }
    default:
      throw std::logic_error("classify_branch: class not congruent to 2 mod 3");
  }
  for (int j = 0; j < 3; ++j) info.lifts[j] = (*info.lift_base + j * sub) % mod;
  return info;
}

}  // namespace tribound
