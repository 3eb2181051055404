#include "tribound/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "tribound/collatz.hpp"
#include "tribound/errors.hpp"
#include "tribound/lp.hpp"
#include "real.hpp"

namespace tribound {

using internal::Big;
using internal::decimal;
using internal::decimal_of_double;
using internal::pow_shift;

namespace {

constexpr double kLog2Of3 = 1.5849625007211562;  // screen-precision alpha

double coeff_double(double lambda, ExponentShift s) {
  return std::pow(lambda, static_cast<double>(s.p) + static_cast<double>(s.q) * kLog2Of3);
}

void run_chunked(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || n < 4096) {
    body(0, n);
    return;
  }
  const std::size_t t = static_cast<std::size_t>(threads);
  const std::size_t chunk = (n + t - 1) / t;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t b = 0; b < n; b += chunk) {
    pool.emplace_back(body, b, std::min(n, b + chunk));
  }
  for (auto& th : pool) th.join();
}

}  // namespace

NtOperator NtOperator::make(int k) {
  if (k < 2 || k > 20) {
    throw std::invalid_argument("NtOperator: k must be in [2, 20]");
  }
  NtOperator op;
  op.k = k;
  op.n = static_cast<std::size_t>(pow3(k - 1));
  op.succ.resize(op.n);
  op.branch.resize(op.n);
  op.lift.assign(3 * op.n, 0);
  for (std::size_t i = 0; i < op.n; ++i) {
    const u64 m = 3 * static_cast<u64>(i) + 2;
    const BranchInfo info = classify_branch(ResidueClass{k, m});
    op.succ[i] = static_cast<std::uint32_t>((info.successor - 2) / 3);
    op.branch[i] = static_cast<std::uint8_t>(info.branch);
    if (info.branch != Branch::D2) {
      for (int j = 0; j < 3; ++j) {
        op.lift[3 * i + j] = static_cast<std::uint32_t>((info.lifts[j] - 2) / 3);
      }
    }
  }
  return op;
}

void NtOperator::apply(const std::vector<double>& c, std::vector<double>& out, double cf_m2,
                       double cf_a2, double cf_a1, int threads) const {
  out.resize(n);
  run_chunked(n, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double v = cf_m2 * c[succ[i]];
      if (branch[i] == static_cast<std::uint8_t>(Branch::D1)) {
        v += cf_a2 * lift_min(c, i);
      } else if (branch[i] == static_cast<std::uint8_t>(Branch::D3)) {
        v += cf_a1 * lift_min(c, i);
      }
      out[i] = v;
    }
  });
}

OperatorState eval_operator(const OperatorState& state, double lambda) {
  const NtOperator op = NtOperator::make(state.k);
  if (state.c.size() != op.n) {
    throw std::invalid_argument("eval_operator: vector length must be 3^(k-1)");
  }
  if (!(lambda >= 1.0 && lambda <= 2.0)) {
    throw std::invalid_argument("eval_operator: lambda must lie in [1, 2]");
  }
  OperatorState out{state.k, {}};
  op.apply(state.c, out.c, coeff_double(lambda, {-2, 0}), coeff_double(lambda, {-2, 1}),
           coeff_double(lambda, {-1, 1}));
  return out;
}

bool certify_feasible(const NtOperator& op, double lambda, const std::vector<double>& c,
                      unsigned precision_bits) {
  if (c.size() != op.n) throw std::invalid_argument("certify_feasible: bad vector length");
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(precision_bits);
  Big lam(prec);
  lam.set(lambda);  // doubles transfer exactly
  // Coefficients rounded down, so the accumulated right side is a true lower
  // bound on F(c); F(c) >= c then holds in exact arithmetic.
  const Big cf_m2 = pow_shift(lam, {-2, 0}, MPFR_RNDD, prec);
  const Big cf_a2 = pow_shift(lam, {-2, 1}, MPFR_RNDD, prec);
  const Big cf_a1 = pow_shift(lam, {-1, 1}, MPFR_RNDD, prec);
  mpfr_t t, u;
  mpfr_init2(t, prec);
  mpfr_init2(u, prec);
  bool ok = true;
  for (std::size_t i = 0; i < op.n && ok; ++i) {
    mpfr_mul_d(t, cf_m2.raw(), c[op.succ[i]], MPFR_RNDD);
    if (op.branch[i] != static_cast<std::uint8_t>(Branch::D2)) {
      const Big& cf = op.branch[i] == static_cast<std::uint8_t>(Branch::D1) ? cf_a2 : cf_a1;
      mpfr_mul_d(u, cf.raw(), op.lift_min(c, i), MPFR_RNDD);
      mpfr_add(t, t, u, MPFR_RNDD);
    }
    if (mpfr_cmp_d(t, c[i]) < 0) ok = false;
  }
  mpfr_clear(t);
  mpfr_clear(u);
  return ok;
}

std::string certify_infeasible(const NtOperator& op, double lambda, const std::vector<double>& u,
                               unsigned precision_bits) {
  if (u.size() != op.n) throw std::invalid_argument("certify_infeasible: bad vector length");
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(precision_bits);
  Big lam(prec);
  lam.set(lambda);
  // Coefficients rounded up: theta >= sup_i F(u)_i / u_i.  theta < 1 rules out
  // any fixed point at or above scale: c <= F(c) would give c <= theta^s * u
  // for all s, forcing c = 0, while a feasible point has entries >= 1.
  const Big cf_m2 = pow_shift(lam, {-2, 0}, MPFR_RNDU, prec);
  const Big cf_a2 = pow_shift(lam, {-2, 1}, MPFR_RNDU, prec);
  const Big cf_a1 = pow_shift(lam, {-1, 1}, MPFR_RNDU, prec);
  mpfr_t t, w, theta;
  mpfr_init2(t, prec);
  mpfr_init2(w, prec);
  mpfr_init2(theta, prec);
  mpfr_set_zero(theta, 1);
  for (std::size_t i = 0; i < op.n; ++i) {
    if (!(u[i] > 0)) {
      mpfr_clears(t, w, theta, nullptr);
      throw std::invalid_argument("certify_infeasible: vector must be positive");
    }
    mpfr_mul_d(t, cf_m2.raw(), u[op.succ[i]], MPFR_RNDU);
    if (op.branch[i] != static_cast<std::uint8_t>(Branch::D2)) {
      const Big& cf = op.branch[i] == static_cast<std::uint8_t>(Branch::D1) ? cf_a2 : cf_a1;
      mpfr_mul_d(w, cf.raw(), op.lift_min(u, i), MPFR_RNDU);
      mpfr_add(t, t, w, MPFR_RNDU);
    }
    mpfr_div_d(t, t, u[i], MPFR_RNDU);
    if (mpfr_cmp(t, theta) > 0) mpfr_set(theta, t, MPFR_RNDU);
  }
  std::string out;
  if (mpfr_cmp_ui(theta, 1) < 0) {
    Big th(prec);
    mpfr_set(th.raw(), theta, MPFR_RNDU);
    out = decimal(th, 30, MPFR_RNDU);
  }
  mpfr_clears(t, w, theta, nullptr);
  return out;
}

PowerResult power_iterate(const NtOperator& op, double lambda, const PowerOptions& opts) {
  if (!(lambda >= 1.0 && lambda <= 2.0)) {
    throw std::invalid_argument("power_iterate: lambda must lie in [1, 2]");
  }
  const double cf_m2 = coeff_double(lambda, {-2, 0});
  const double cf_a2 = coeff_double(lambda, {-2, 1});
  const double cf_a1 = coeff_double(lambda, {-1, 1});

  PowerResult res;
  std::vector<double> cur(op.n, 1.0), next(op.n);
  u64 next_attempt = 0;  // backoff after a failed certification near the boundary
  for (u64 s = 1; s <= opts.max_iter; ++s) {
    op.apply(cur, next, cf_m2, cf_a2, cf_a1, opts.threads);
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0, vmax = 0;
    for (std::size_t i = 0; i < op.n; ++i) {
      const double r = next[i] / cur[i];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      vmax = std::max(vmax, next[i]);
    }
    if (s >= next_attempt) {
      if (rmin >= 1.0) {
        if (certify_feasible(op, lambda, cur, opts.precision_bits)) {
          res.kind = Feasibility::Feasible;
          res.vec = std::move(cur);
          res.sweeps = s;
          return res;
        }
        next_attempt = s + 64;
      } else if (rmax < 1.0) {
        std::string theta = certify_infeasible(op, lambda, cur, opts.precision_bits);
        if (!theta.empty()) {
          res.kind = Feasibility::Infeasible;
          res.vec = std::move(cur);
          res.theta = std::move(theta);
          res.sweeps = s;
          return res;
        }
        next_attempt = s + 64;
      }
    }
    const double inv = 1.0 / vmax;
    for (std::size_t i = 0; i < op.n; ++i) next[i] *= inv;
    cur.swap(next);
  }
  res.kind = Feasibility::Undetermined;
  res.vec = std::move(cur);
  res.sweeps = opts.max_iter;
  return res;
}

PowerResult power_iterate(int k, double lambda, const PowerOptions& opts) {
  return power_iterate(NtOperator::make(k), lambda, opts);
}

Certificate make_certificate(const NtOperator& op, double lambda, std::vector<double> c,
                             unsigned precision_bits) {
  if (c.size() != op.n) throw std::invalid_argument("make_certificate: bad vector length");
  const double vmin = *std::min_element(c.begin(), c.end());
  if (!(vmin > 0)) throw std::invalid_argument("make_certificate: vector must be positive");
  for (auto& x : c) x /= vmin;
  if (!certify_feasible(op, lambda, c, precision_bits)) {
    throw PrecisionExhausted("make_certificate: vector lost feasibility under rescaling");
  }
  Certificate cert;
  cert.family = Family::NT;
  cert.k = op.k;
  cert.lambda = decimal_of_double(lambda);
  cert.precision_bits = precision_bits;
  cert.principal.reserve(op.n);
  for (double x : c) cert.principal.push_back(decimal_of_double(x));
  cert.verified = true;
  return cert;
}

namespace {

struct Settled {
  std::vector<double> vec;
  u64 sweeps = 0;
};

// Continue iterating at a fixed lambda until the per-entry growth ratios agree
// to ~1e-10, then scale so the smallest entry is exactly 1.
Settled settle_eigenvector(const NtOperator& op, double lambda, std::vector<double> v,
                           u64 max_sweeps, int threads) {
  const double cf_m2 = coeff_double(lambda, {-2, 0});
  const double cf_a2 = coeff_double(lambda, {-2, 1});
  const double cf_a1 = coeff_double(lambda, {-1, 1});
  std::vector<double> next(op.n);
  Settled out;
  for (u64 s = 0; s < max_sweeps; ++s) {
    op.apply(v, next, cf_m2, cf_a2, cf_a1, threads);
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0, vmax = 0;
    for (std::size_t i = 0; i < op.n; ++i) {
      const double r = next[i] / v[i];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      vmax = std::max(vmax, next[i]);
    }
    const double inv = 1.0 / vmax;
    for (std::size_t i = 0; i < op.n; ++i) next[i] *= inv;
    v.swap(next);
    ++out.sweeps;
    if (rmax - rmin < 1e-10) break;
  }
  const double vmin = *std::min_element(v.begin(), v.end());
  for (auto& x : v) x /= vmin;
  out.vec = std::move(v);
  return out;
}

}  // namespace

LambdaSearchResult search_lambda(int k, const SearchOptions& opts) {
  const NtOperator op = NtOperator::make(k);
  if (!(opts.tol > 0) || opts.tol >= 1) {
    throw std::invalid_argument("search_lambda: tol must lie in (0, 1)");
  }

  LambdaSearchResult res;
  res.k = k;
  u64 total_sweeps = 0;
  unsigned prec_used = opts.precision_bits;

  auto classify = [&](double lambda) -> PowerResult {
    u64 iters = opts.max_iter;
    unsigned prec = opts.precision_bits;
    while (true) {
      PowerResult r = power_iterate(op, lambda, PowerOptions{iters, prec, opts.threads});
      total_sweeps += r.sweeps;
      if (r.kind != Feasibility::Undetermined) {
        prec_used = std::max(prec_used, prec);
        return r;
      }
      if (iters < opts.max_iter_cap) {
        iters *= 4;
      } else if (prec < opts.precision_cap) {
        prec *= 2;
        iters = opts.max_iter;
      } else {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "classification stalled at lambda=%.17g (k=%d, %llu sweeps, %u bits)",
                      lambda, k, static_cast<unsigned long long>(iters), prec);
        throw PrecisionExhausted(buf);
      }
    }
  };

  double lo, hi;
  std::vector<double> best;
  if (opts.resume_lo > 0 || opts.resume_hi > 0) {
    lo = opts.resume_lo;
    hi = opts.resume_hi;
    if (!(lo >= 1.0 && hi <= 2.0 && lo < hi)) {
      throw std::invalid_argument("search_lambda: bad resume bracket");
    }
  } else {
    lo = 1.0;
    hi = 2.0;
  }
  // Re-certify the endpoints rather than trusting the caller.
  if (lo == 1.0) {
    best.assign(op.n, 1.0);  // all coefficients are exactly 1, so F(1) >= 1
    if (!certify_feasible(op, lo, best, opts.precision_bits)) {
      throw std::logic_error("search_lambda: lambda=1 failed its feasibility check");
    }
  } else {
    PowerResult r = classify(lo);
    if (r.kind != Feasibility::Feasible) {
      throw std::invalid_argument("search_lambda: resume lower endpoint is not feasible");
    }
    best = std::move(r.vec);
  }
  if (classify(hi).kind != Feasibility::Infeasible) {
    throw std::logic_error("search_lambda: upper endpoint classified feasible");
  }

  int step = 0;
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);  // dyadic, exactly representable
    PowerResult r = classify(mid);
    if (r.kind == Feasibility::Feasible) {
      lo = mid;
      best = std::move(r.vec);
    } else {
      hi = mid;
    }
    ++step;
    if (opts.on_step) opts.on_step(step, lo, hi);
  }

  Settled settled = settle_eigenvector(op, lo, std::move(best), opts.eigen_sweeps, opts.threads);
  total_sweeps += settled.sweeps;
  std::vector<double>& v = settled.vec;
  if (!certify_feasible(op, lo, v, prec_used)) {
    // The rescaled vector sits close enough to the eigenvector that this holds
    // with room to spare whenever lo is strictly inside the feasible region;
    // a handful of extra sweeps recovers the margin otherwise.
    Settled retry = settle_eigenvector(op, lo, std::move(v), 20000, opts.threads);
    total_sweeps += retry.sweeps;
    v = std::move(retry.vec);
    if (!certify_feasible(op, lo, v, prec_used)) {
      throw PrecisionExhausted("search_lambda: could not certify the settled vector");
    }
  }

  res.lambda_lo = lo;
  res.lambda_hi = hi;
  res.gamma = std::log2(lo);
  res.c_max = *std::max_element(v.begin(), v.end());
  res.cbar_k = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(op.n);
  const std::size_t stride = op.n / 3;  // 3^{k-2}
  double acc = 0;
  for (std::size_t j = 0; j < stride; ++j) {
    acc += std::min({v[j], v[j + stride], v[j + 2 * stride]});
  }
  res.cbar_km1 = acc / static_cast<double>(stride);
  res.diff = res.cbar_k - res.cbar_km1;
  res.total_sweeps = total_sweeps;

  res.cert.family = Family::NT;
  res.cert.k = k;
  res.cert.lambda = decimal_of_double(lo);
  res.cert.precision_bits = prec_used;
  res.cert.principal.reserve(op.n);
  for (double x : v) res.cert.principal.push_back(decimal_of_double(x));
  // Independent re-check through the constraint rows, not the operator.
  const CheckResult chk = check_certificate(build_lp_nt(k), res.cert);
  if (!chk.verified) {
    throw std::logic_error("search_lambda: certificate failed row verification: " + chk.detail);
  }
  res.cert.verified = true;
  return res;
}

bool averaged_inequality_holds(const LambdaSearchResult& r) {
  const double lam = r.lambda_lo;
  const double rhs = coeff_double(lam, {-2, 0}) * r.cbar_k +
                     (coeff_double(lam, {-2, 1}) + coeff_double(lam, {-1, 1})) / 3.0 * r.cbar_km1;
  return r.cbar_k <= rhs * (1 + 1e-12);
}

std::string format_summary_row(const LambdaSearchResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.7f,%.7f,%.7f,%.7f,%.7f,%.7f", r.k, r.gamma, r.lambda_lo,
                r.c_max, r.cbar_k, r.cbar_km1, r.diff);
  return buf;
}

TreeFamilyOperator TreeFamilyOperator::make(const System& sys) {
  TreeFamilyOperator op;
  op.k_ = sys.k;
  op.n_ = sys.trees.size();
  for (const IneqTree& tree : sys.trees) {
    const std::vector<std::uint32_t> order = tree.bfs_order();
    std::vector<std::uint32_t> pos(tree.nodes.size(), 0);
    for (std::size_t j = 0; j < order.size(); ++j) pos[order[j]] = static_cast<std::uint32_t>(j);
    const std::uint32_t base = static_cast<std::uint32_t>(op.nodes_.size());
    op.tree_root_.push_back(base);
    for (std::uint32_t id : order) {
      const TreeNode& src = tree.nodes[id];
      Node n;
      n.kind = src.kind == NodeKind::M ? 2 : (src.children.empty() ? 0 : 1);
      n.cls_idx = static_cast<std::uint32_t>((src.cls - 2) / 3);
      n.shift = src.shift;
      n.child_begin = static_cast<std::uint32_t>(op.child_ids_.size());
      for (std::uint32_t ch : src.children) op.child_ids_.push_back(base + pos[ch]);
      n.child_end = static_cast<std::uint32_t>(op.child_ids_.size());
      op.nodes_.push_back(n);
    }
  }
  op.values_.resize(op.nodes_.size());
  return op;
}

void TreeFamilyOperator::apply(const std::vector<double>& c, std::vector<double>& out,
                               double lambda) {
  if (c.size() != n_) throw std::invalid_argument("TreeFamilyOperator: bad vector length");
  out.resize(n_);
  // Parents precede children, so one reverse pass evaluates bottom-up: leaves
  // contribute lambda^shift * c, p-nodes add their children, m-nodes take the
  // minimum (their row block pins the auxiliary to the cheapest branch).
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    const Node& n = nodes_[i];
    if (n.kind == 0) {
      values_[i] = coeff_double(lambda, n.shift) * c[n.cls_idx];
    } else if (n.kind == 1) {
      double v = 0;
      for (std::uint32_t j = n.child_begin; j < n.child_end; ++j) v += values_[child_ids_[j]];
      values_[i] = v;
    } else {
      double v = std::numeric_limits<double>::infinity();
      for (std::uint32_t j = n.child_begin; j < n.child_end; ++j) {
        v = std::min(v, values_[child_ids_[j]]);
      }
      values_[i] = v;
    }
  }
  for (std::size_t t = 0; t < n_; ++t) out[t] = values_[tree_root_[t]];
}

Feasibility classify_lambda_tree(TreeFamilyOperator& op, double lambda, u64 max_iter,
                                 double margin) {
  std::vector<double> cur(op.size(), 1.0), next(op.size());
  for (u64 s = 0; s < max_iter; ++s) {
    op.apply(cur, next, lambda);
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0, vmax = 0;
    for (std::size_t i = 0; i < op.size(); ++i) {
      const double r = next[i] / cur[i];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      vmax = std::max(vmax, next[i]);
    }
    if (rmin >= 1.0 + margin) return Feasibility::Feasible;
    if (rmax <= 1.0 - margin) return Feasibility::Infeasible;
    const double inv = 1.0 / vmax;
    for (std::size_t i = 0; i < op.size(); ++i) next[i] *= inv;
    cur.swap(next);
  }
  return Feasibility::Undetermined;
}

}  // namespace tribound
