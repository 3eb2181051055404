// Acceptance gate: each invocation checks one numbered criterion and prints
// exactly one PASS/FAIL line for it.  Tolerances are pinned here, next to the
// expected values they guard.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tribound/certificate.hpp"
#include "tribound/collatz.hpp"
#include "tribound/eliminate.hpp"
#include "tribound/errors.hpp"
#include "tribound/lp.hpp"
#include "tribound/solver.hpp"
#include "tribound/system.hpp"
#include "tribound/tree.hpp"
#include "tribound/verify.hpp"

using namespace tribound;

namespace {

// ---- pinned tolerances and expected values ---------------------------------

constexpr double kLambdaTol = 1e-3;  // |lambda_lo - expected|, criteria 3 and 4
constexpr double kGammaTol = 1e-3;   // |gamma - expected|, criteria 3 and 4
constexpr double kRelTol = 0.02;     // relative, C_max and both averages
constexpr double kSearchTol = 1e-6;  // bisection bracket width for all searches

// Expected per-level results for k = 2..7 (criterion 3).
constexpr double kExpectedLambda[] = {1.3534010, 1.5275960, 1.6122870,
                                      1.6627590, 1.6944520, 1.7201900};
constexpr double kExpectedGamma[] = {0.4365880, 0.6112620, 0.6891080,
                                     0.7335790, 0.7608180, 0.7825670};
constexpr double kExpectedCmax[] = {1.8316920, 3.4881908, 5.4951954,
                                    9.0756176, 12.8769418, 20.1963763};
constexpr double kExpectedCbarK[] = {1.5237640, 2.1014900, 2.7869040,
                                     3.4648343, 3.9667005, 4.8122983};
constexpr double kExpectedCbarKm1[] = {1.0000000, 1.6994294, 2.4010985,
                                       3.0771822, 3.5825321, 4.4061650};

// Criterion 4 (slow): k = 10 and 11.
constexpr double kExpectedLambda10 = 1.7771270;
constexpr double kExpectedLambda11 = 1.7922310;
constexpr double kExpectedGamma11 = 0.8417560;
constexpr double kHeadlineExponent = 0.84;  // gamma_11 must clear this

// Runtime budgets, seconds.
constexpr double kBudgetK3Elim = 30.0;      // criterion 1, k <= 3
constexpr double kBudgetK4Elim = 120.0;     // criterion 1, k = 4
constexpr double kBudgetTable = 600.0;      // criterion 3 total
constexpr double kBudgetSlow = 7200.0;      // criterion 4 total

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
  va_list args;
  va_start(args, pattern);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

bool rel_close(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::fabs(want);
}

// ---- criterion 1: eliminator size table ------------------------------------

Outcome criterion1() {
  const std::vector<std::pair<int, ExpansionStats>> expect = {
      {2, {3, 8}}, {3, {10, 84}}, {4, {41, 12829}}};
  const auto t0 = std::chrono::steady_clock::now();
  double t_k3 = 0;
  for (const auto& [k, want] : expect) {
    System sys = eliminate_system(k);
    ExpansionStats worst;
    for (const auto& t : sys.trees) {
      const ExpansionStats s = stats(t);
      worst.depth = std::max(worst.depth, s.depth);
      worst.literals = std::max(worst.literals, s.literals);
    }
    if (!(worst == want)) {
      return {false, fmt("k=%d expansion (%d, %llu) != (%d, %llu)", k, worst.depth,
                         (unsigned long long)worst.literals, want.depth,
                         (unsigned long long)want.literals)};
    }
    if (k == 3) t_k3 = seconds_since(t0);
  }
  const double t_all = seconds_since(t0);
  if (t_k3 > kBudgetK3Elim) return {false, fmt("k<=3 took %.1fs (budget %.0fs)", t_k3, kBudgetK3Elim)};
  if (t_all > kBudgetK3Elim + kBudgetK4Elim)
    return {false, fmt("k=4 took %.1fs (budget %.0fs)", t_all - t_k3, kBudgetK4Elim)};
  return {true, fmt("sizes (3,8) (10,84) (41,12829) exact; %.2fs", t_all)};
}

// ---- criterion 2: the worked k = 2 example ---------------------------------

Outcome criterion2() {
  System sys = eliminate_system(2);
  const IneqTree& t = sys.tree_for(8);

  int mnodes = 0;
  for (auto id : t.bfs_order())
    if (t.nodes[id].kind == NodeKind::M) ++mnodes;
  if (mnodes != 3) return {false, fmt("tree for class 8 has %d m-nodes, want 3", mnodes)};

  std::vector<std::pair<u64, ExponentShift>> leaves;
  for (auto id : t.leaves_preorder()) leaves.emplace_back(t.nodes[id].cls, t.nodes[id].shift);
  std::vector<std::pair<u64, ExponentShift>> want = {
      {5, {-2, 0}}, {8, {-3, 1}}, {2, {-3, 1}}, {8, {-5, 2}},
      {2, {-5, 2}}, {2, {-5, 3}}, {5, {-5, 3}}, {8, {-5, 3}}};
  auto key = [](const std::pair<u64, ExponentShift>& v) {
    return std::tuple<u64, std::int64_t, std::int64_t>(v.first, v.second.p, v.second.q);
  };
  auto lt = [&](const auto& a, const auto& b) { return key(a) < key(b); };
  std::sort(leaves.begin(), leaves.end(), lt);
  std::sort(want.begin(), want.end(), lt);
  if (leaves != want) return {false, "leaf multiset of the class-8 tree is off"};

  // The full eliminated program, row for row.
  LinearProgram lp = build_lp_el(sys);
  auto P = [](u64 m) { return VarId{VarRole::Principal, m, 0, 0}; };
  auto A = [](u64 root, std::uint32_t i) { return VarId{VarRole::TreeAux, 2, root, i}; };
  const ExponentShift none{0, 0}, m2{-2, 0}, a_2{-2, 1}, a_1{-1, 1}, a_3{-3, 1},
      aa_3{-3, 2}, aa_5{-5, 2}, aaa_5{-5, 3};
  const std::vector<LPConstraint> rows = {
      {{P(2), none}, {{P(8), m2}, {A(2, 1), a_2}}},
      {{A(2, 1), a_2}, {{P(2), a_2}}},
      {{A(2, 1), a_2}, {{P(5), a_2}}},
      {{A(2, 1), a_2}, {{P(8), a_2}}},
      {{P(5), none}, {{P(2), m2}}},
      {{P(8), none}, {{P(5), m2}, {A(8, 1), a_1}}},
      {{A(8, 1), a_1}, {{P(8), a_3}, {A(8, 2), aa_3}}},
      {{A(8, 1), a_1}, {{P(2), a_3}}},
      {{A(8, 2), aa_3}, {{P(8), aa_5}, {A(8, 3), aaa_5}}},
      {{A(8, 2), aa_3}, {{P(2), aa_5}}},
      {{A(8, 3), aaa_5}, {{P(2), aaa_5}}},
      {{A(8, 3), aaa_5}, {{P(5), aaa_5}}},
      {{A(8, 3), aaa_5}, {{P(8), aaa_5}}},
  };
  if (lp.constraints.size() != rows.size())
    return {false, fmt("program has %zu rows, want %zu", lp.constraints.size(), rows.size())};
  for (const auto& row : rows) {
    if (std::count(lp.constraints.begin(), lp.constraints.end(), row) != 1)
      return {false, "row " + row.lhs.var.name() + " mismatch against the expected program"};
  }
  return {true, "class-8 tree (3 m-nodes, 8 leaves) and all 13 program rows exact"};
}

// ---- criterion 3: per-level threshold table, k = 2..7 -----------------------

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string summary;
  for (int k = 2; k <= 7; ++k) {
    SearchOptions opts;
    opts.tol = kSearchTol;
    const LambdaSearchResult r = search_lambda(k, opts);
    const int i = k - 2;
    if (std::fabs(r.lambda_lo - kExpectedLambda[i]) > kLambdaTol)
      return {false, fmt("k=%d lambda %.7f vs %.7f", k, r.lambda_lo, kExpectedLambda[i])};
    if (std::fabs(r.gamma - kExpectedGamma[i]) > kGammaTol)
      return {false, fmt("k=%d gamma %.7f vs %.7f", k, r.gamma, kExpectedGamma[i])};
    if (!rel_close(r.c_max, kExpectedCmax[i], kRelTol))
      return {false, fmt("k=%d c_max %.7f vs %.7f", k, r.c_max, kExpectedCmax[i])};
    if (!rel_close(r.cbar_k, kExpectedCbarK[i], kRelTol))
      return {false, fmt("k=%d cbar_k %.7f vs %.7f", k, r.cbar_k, kExpectedCbarK[i])};
    if (!rel_close(r.cbar_km1, kExpectedCbarKm1[i], kRelTol))
      return {false, fmt("k=%d cbar_km1 %.7f vs %.7f", k, r.cbar_km1, kExpectedCbarKm1[i])};
    if (!r.cert.verified) return {false, fmt("k=%d certificate unverified", k)};
    if (!averaged_inequality_holds(r)) return {false, fmt("k=%d averaged row fails", k)};
    summary += fmt("%s%.7f", k == 2 ? "" : " ", r.lambda_lo);
  }
  const double t = seconds_since(t0);
  if (t > kBudgetTable) return {false, fmt("took %.1fs (budget %.0fs)", t, kBudgetTable)};
  return {true, fmt("lambda_lo = %s; all within tolerance; %.1fs", summary.c_str(), t)};
}

// ---- criterion 4 (slow): k = 10, 11 ----------------------------------------

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  SearchOptions opts;
  opts.tol = kSearchTol;
  const LambdaSearchResult r10 = search_lambda(10, opts);
  if (std::fabs(r10.lambda_lo - kExpectedLambda10) > kLambdaTol)
    return {false, fmt("k=10 lambda %.7f vs %.7f", r10.lambda_lo, kExpectedLambda10)};
  const LambdaSearchResult r11 = search_lambda(11, opts);
  if (std::fabs(r11.lambda_lo - kExpectedLambda11) > kLambdaTol)
    return {false, fmt("k=11 lambda %.7f vs %.7f", r11.lambda_lo, kExpectedLambda11)};
  if (std::fabs(r11.gamma - kExpectedGamma11) > kGammaTol)
    return {false, fmt("k=11 gamma %.7f vs %.7f", r11.gamma, kExpectedGamma11)};
  if (!(r11.gamma >= kHeadlineExponent))
    return {false, fmt("k=11 gamma %.7f below %.2f", r11.gamma, kHeadlineExponent)};
  const double t = seconds_since(t0);
  if (t > kBudgetSlow) return {false, fmt("took %.1fs (budget %.0fs)", t, kBudgetSlow)};
  return {true, fmt("lambda_10=%.7f lambda_11=%.7f gamma_11=%.7f >= %.2f; %.0fs",
                    r10.lambda_lo, r11.lambda_lo, r11.gamma, kHeadlineExponent, t)};
}

// ---- criterion 5: transfer to the eliminated family ------------------------

Outcome criterion5() {
  int checked = 0;
  for (int k = 2; k <= 3; ++k) {
    // 1.0, 1.2, and every bisection lower endpoint seen along the way.
    std::set<double> lams = {1.0, 1.2};
    SearchOptions opts;
    opts.tol = kSearchTol;
    opts.on_step = [&](int, double lo, double) {
      if (lo > 1.0) lams.insert(lo);
    };
    const LambdaSearchResult r = search_lambda(k, opts);
    lams.insert(r.lambda_lo);

    NtOperator op = NtOperator::make(k);
    System sys = eliminate_system(k);
    LinearProgram lp_nt = build_lp_nt(k);
    LinearProgram lp_el = build_lp_el(sys);
    for (double lam : lams) {
      PowerResult pr = power_iterate(op, lam, {});
      if (pr.kind != Feasibility::Feasible)
        return {false, fmt("k=%d lambda=%.9f did not classify feasible", k, lam)};
      Certificate nt = make_certificate(op, lam, pr.vec);
      CheckResult res_nt = check_certificate(lp_nt, nt);
      if (!res_nt.verified)
        return {false, fmt("k=%d lambda=%.9f direct check: %s", k, lam, res_nt.detail.c_str())};
      Certificate el = extend_certificate_nt_to_el(nt, sys);
      CheckResult res_el = check_certificate(lp_el, el);
      if (!res_el.verified)
        return {false, fmt("k=%d lambda=%.9f transfer check: %s", k, lam, res_el.detail.c_str())};
      ++checked;
    }
  }
  return {true, fmt("%d lambda points transferred and re-verified at k=2,3", checked)};
}

// ---- criterion 6: trivial feasibility, both families ------------------------

Outcome criterion6() {
  for (int k = 2; k <= 8; ++k) {
    Certificate c = trivial_certificate(k);
    CheckResult res = check_certificate(build_lp_nt(k), c);
    if (!res.verified) return {false, fmt("direct k=%d: %s", k, res.detail.c_str())};
  }
  for (int k = 2; k <= 4; ++k) {
    System sys = eliminate_system(k);
    Certificate el = extend_certificate_nt_to_el(trivial_certificate(k), sys);
    CheckResult res = check_certificate(build_lp_el(sys), el);
    if (!res.verified) return {false, fmt("eliminated k=%d: %s", k, res.detail.c_str())};
  }
  // k >= 5 eliminated systems do not fit in memory; prove it by letting the
  // splitter hit a cap rather than pretending to verify.  Class 3^5 - 1 is
  // the worst expander (the argmax class is 3^k - 1 at every level checked).
  bool capped = false;
  try {
    EliminationOptions opts;
    opts.split_cap = 200'000;
    eliminate(build_base_tree(5, 242), opts);
  } catch (const IterationLimit&) {
    capped = true;
  }
  if (!capped) return {false, "k=5 expansion unexpectedly fit under 2*10^5 splits"};
  return {true,
          "direct k=2..8 and eliminated k=2..4 verified at lambda=1, c=1; "
          "eliminated k=5..8 skipped: expansion exceeds 2*10^5 splits (IterationLimit)"};
}

// ---- criterion 7: operator property batteries ------------------------------

Outcome criterion7() {
  std::mt19937_64 rng(424243);
  std::uniform_real_distribution<double> lam_dist(1.0, 2.0);
  std::uniform_real_distribution<double> val_dist(0.1, 10.0);
  std::uniform_real_distribution<double> bump_dist(0.0, 3.0);

  auto random_vec = [&](std::size_t n) {
    std::vector<double> c(n);
    for (auto& v : c) v = val_dist(rng);
    return c;
  };
  auto sweep = [](const NtOperator& op, double lam, const std::vector<double>& c) {
    OperatorState s{op.k, c};
    return eval_operator(s, lam).c;
  };
  auto lift_vec = [](int k, const std::vector<double>& c) {
    const u64 mod = pow3(k);
    std::vector<double> up(3 * c.size());
    for (std::size_t i = 0; i < up.size(); ++i) up[i] = c[((3 * i + 2) % mod - 2) / 3];
    return up;
  };

  for (int k = 2; k <= 4; ++k) {
    NtOperator op = NtOperator::make(k);
    NtOperator up = NtOperator::make(k + 1);
    for (int trial = 0; trial < 1000; ++trial) {
      const double lam = lam_dist(rng);
      const std::vector<double> c = random_vec(op.n);

      // monotone
      std::vector<double> d = c;
      for (auto& v : d) v += bump_dist(rng);
      const auto fc = sweep(op, lam, c);
      const auto fd = sweep(op, lam, d);
      for (std::size_t i = 0; i < op.n; ++i)
        if (!(fc[i] <= fd[i])) return {false, fmt("monotonicity k=%d trial=%d", k, trial)};

      // homogeneous (power-of-two scale: exact)
      std::vector<double> tc = c;
      for (auto& v : tc) v *= 2.0;
      const auto ftc = sweep(op, lam, tc);
      for (std::size_t i = 0; i < op.n; ++i)
        if (ftc[i] != 2.0 * fc[i]) return {false, fmt("homogeneity k=%d trial=%d", k, trial)};

      // lifting dominance
      const auto lifted_image = lift_vec(k, fc);
      const auto image_of_lift = sweep(up, lam, lift_vec(k, c));
      for (std::size_t i = 0; i < image_of_lift.size(); ++i)
        if (!(image_of_lift[i] >= lifted_image[i]))
          return {false, fmt("lifting k=%d trial=%d", k, trial)};
    }
  }

  // Thresholds must not shrink as the level refines.
  double prev = 1.0;
  std::string lams;
  for (int k = 2; k <= 7; ++k) {
    SearchOptions opts;
    opts.tol = kSearchTol;
    const LambdaSearchResult r = search_lambda(k, opts);
    if (r.lambda_lo < prev - 1e-9)
      return {false, fmt("lambda_lo shrank at k=%d: %.7f < %.7f", k, r.lambda_lo, prev)};
    prev = r.lambda_lo;
    lams += fmt("%s%.4f", k == 2 ? "" : "<=", r.lambda_lo);
  }
  return {true, "3000 random instances (monotone, homogeneous, lifting); " + lams};
}

// ---- criterion 8: counting oracle equivalence ------------------------------

Outcome criterion8() {
  constexpr u64 kMaxA = 50, kMaxX = 2000;
  if (pi_a_star(2, 4) != 3) return {false, "pi*_2(4) != 3"};

  for (u64 a = 1; a <= kMaxA; ++a) {
    if (a % 3 == 0) continue;
    // Forward scan: for each n, the running maximum up to the first visit of
    // a (0 when the trajectory never reaches a).
    std::vector<u64> reach_max(kMaxX + 1, 0);
    for (u64 n = 1; n <= kMaxX; ++n) {
      u64 cur = n, mx = n;
      for (int step = 0; step < 100000; ++step) {
        if (cur == a) {
          reach_max[n] = mx;
          break;
        }
        if (cur <= 2 && a > 2) break;  // trapped in the terminal cycle
        cur = t_step(cur);
        mx = std::max(mx, cur);
      }
    }
    for (u64 x = 1; x <= kMaxX; ++x) {
      u64 want = 0;
      for (u64 n = 1; n <= x; ++n)
        if (reach_max[n] && reach_max[n] <= x) ++want;
      const u64 got = pi_a_star(a, x);
      if (got != want)
        return {false, fmt("a=%llu x=%llu: backward %llu vs forward %llu", (unsigned long long)a,
                           (unsigned long long)x, (unsigned long long)got,
                           (unsigned long long)want)};
    }
    for (u64 x : {u64{10}, u64{100}, u64{977}, kMaxX}) {
      if (pi_a_star(a, x) > pi_a(a, x))
        return {false, fmt("a=%llu x=%llu: bounded count exceeds orbit count",
                           (unsigned long long)a, (unsigned long long)x)};
    }
  }
  return {true, "backward BFS equals forward scan for a<=50, x<=2000; pi* <= pi sampled"};
}

// ---- criterion 9: end-to-end bound checks -----------------------------------

Outcome criterion9() {
  SearchOptions opts;
  opts.tol = kSearchTol;
  const LambdaSearchResult r = search_lambda(2, opts);
  if (!r.cert.verified) return {false, "k=2 certificate unverified"};
  for (u64 a : {5, 11, 17, 23}) {
    const BoundCheckReport rep = check_lower_bound(a, r.cert, 15);
    if (!rep.pass) return {false, fmt("growth bound fails for a=%llu", (unsigned long long)a)};
  }
  const HeadlineReport hr = check_headline_bound({10'000, 100'000, 1'000'000});
  if (!hr.pass) return {false, "headline census bound fails"};
  return {true, fmt("growth bound holds for a=5,11,17,23 (y<=15) at lambda=%.7f; "
                    "census clears x^%.2f at 1e4..1e6",
                    r.lambda_lo, kHeadlineExponent)};
}

// ---- slow streaming probe ---------------------------------------------------

int run_probe_k5() {
  // Evidence backing the criterion-6 skip: the k=5 expansion of class 242
  // (the worst expander) blows past both probe limits without exhausting.
  const ProbeResult p = probe_elimination(5, 242, 226, 1'000'000'000);
  const bool pass = !p.exhausted && p.depth > 226 && p.literals > 1'000'000'000;
  std::printf("probe k5: %s — class 242 reached depth %d, %llu literals, exhausted=%s\n",
              pass ? "PASS" : "FAIL", p.depth, (unsigned long long)p.literals,
              p.exhausted ? "true" : "false");
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 2 && std::strcmp(argv[1], "--probe-k5") == 0) return run_probe_k5();
  if (argc != 3 || std::strcmp(argv[1], "--criterion") != 0) {
    std::fprintf(stderr, "usage: %s --criterion <1..9> | --probe-k5\n", argv[0]);
    return 2;
  }
  const int n = std::atoi(argv[2]);
  static const std::function<Outcome()> table[] = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  if (n < 1 || n > 9) {
    std::fprintf(stderr, "usage: %s --criterion <1..9> | --probe-k5\n", argv[0]);
    return 2;
  }
  Outcome out;
  try {
    out = table[n - 1]();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %d: %s — %s\n", n, out.pass ? "PASS" : "FAIL", out.detail.c_str());
  return out.pass ? 0 : 1;
}
