#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tribound/certificate.hpp"
#include "tribound/system.hpp"

namespace tribound {

// The direct-form constraint rows read as a monotone, positively homogeneous
// operator on positive vectors indexed by [3^k]:
//   F(c)^m = lambda^-2 c^{4m} (+ lambda^{alpha-2|alpha-1} min over lifts).
// Feasibility of the program at lambda is equivalent to the cone spectral
// radius of F being >= 1, which power iteration brackets from both sides.
struct NtOperator {
  int k = 0;
  std::size_t n = 0;                 // 3^{k-1} classes, index (m-2)/3
  std::vector<std::uint32_t> succ;   // index of 4m mod 3^k
  std::vector<std::uint8_t> branch;  // 0, 1, 2
  std::vector<std::uint32_t> lift;   // 3 lift indices per class (zeros for D2)

  static NtOperator make(int k);

  // out = F(c) with the given double coefficients; in/out must not alias.
  void apply(const std::vector<double>& c, std::vector<double>& out, double cf_m2, double cf_a2,
             double cf_a1, int threads = 1) const;

  // min over the three lifts of index i's target class.
  double lift_min(const std::vector<double>& c, std::size_t i) const {
    const double a = c[lift[3 * i]];
    const double b = c[lift[3 * i + 1]];
    const double d = c[lift[3 * i + 2]];
    return a < b ? (a < d ? a : d) : (b < d ? b : d);
  }
};

struct OperatorState {
  int k = 0;
  std::vector<double> c;
};

// One operator sweep at the given lambda (double precision convenience form).
OperatorState eval_operator(const OperatorState& state, double lambda);

enum class Feasibility : std::uint8_t { Feasible, Infeasible, Undetermined };

struct PowerOptions {
  u64 max_iter = 200000;
  unsigned precision_bits = 64;  // certification precision
  int threads = 1;
};

struct PowerResult {
  Feasibility kind = Feasibility::Undetermined;
  std::vector<double> vec;  // certified iterate: c (feasible) or u (infeasible)
  std::string theta;        // infeasible only: certified contraction factor < 1
  u64 sweeps = 0;
};

// Iterates from all-ones.  Feasible means F(c) >= c entrywise was verified
// under downward rounding; Infeasible means F(u) <= theta*u with theta < 1
// verified under upward rounding (any c <= F(c) would then contract to 0, so
// no feasible point >= 1 exists).  Undetermined after max_iter is a value,
// not an error.
PowerResult power_iterate(const NtOperator& op, double lambda, const PowerOptions& opts = {});
PowerResult power_iterate(int k, double lambda, const PowerOptions& opts = {});

// Rigorous screens used by power_iterate; exposed for independent checks.
bool certify_feasible(const NtOperator& op, double lambda, const std::vector<double>& c,
                      unsigned precision_bits);

// Packages a feasible iterate as a direct-form certificate: rescales so the
// smallest entry is exactly 1, re-certifies F(c) >= c at the stated
// precision, and throws PrecisionExhausted if the margin does not survive.
Certificate make_certificate(const NtOperator& op, double lambda, std::vector<double> c,
                             unsigned precision_bits = 64);
// Empty when contraction cannot be certified; otherwise theta < 1 (decimal).
std::string certify_infeasible(const NtOperator& op, double lambda, const std::vector<double>& u,
                               unsigned precision_bits);

struct SearchOptions {
  double tol = 1e-6;            // final bracket width
  u64 max_iter = 100000;        // initial classification budget per lambda
  u64 max_iter_cap = 6'400'000;
  unsigned precision_bits = 64;
  unsigned precision_cap = 512;
  u64 eigen_sweeps = 300000;    // extra sweeps to settle the reported vector
  int threads = 1;
  double resume_lo = 0;         // optional pre-certified bracket to resume
  double resume_hi = 0;
  std::function<void(int step, double lo, double hi)> on_step;  // checkpoint hook
};

struct LambdaSearchResult {
  int k = 0;
  double lambda_lo = 0;  // certified feasible (dyadic, exact)
  double lambda_hi = 0;  // certified infeasible
  double gamma = 0;      // log2(lambda_lo)
  double c_max = 0;
  double cbar_k = 0;     // mean of the certificate entries
  double cbar_km1 = 0;   // mean of the three-way lift minima
  double diff = 0;
  u64 total_sweeps = 0;
  Certificate cert;      // verified direct-form certificate at lambda_lo
};

// Bisection on [1, 2] maintaining certified endpoints; Undetermined outcomes
// escalate iterations then precision before PrecisionExhausted.
LambdaSearchResult search_lambda(int k, const SearchOptions& opts = {});

// Mean-field consequence of summing all branch rows; holds on every feasible
// certificate and is re-checked when reporting.
bool averaged_inequality_holds(const LambdaSearchResult& r);

// CSV row: k,gamma,lambda,cmax,cbar_k,cbar_km1,diff (7 decimals).
std::string format_summary_row(const LambdaSearchResult& r);

// Feasibility screen for a whole tree system (base or eliminated): per tree,
// auxiliaries are eliminated bottom-up (each m-node contributes the minimum
// of its children's values), giving another monotone homogeneous operator.
// Double precision with a safety margin; Undetermined when inside the margin.
class TreeFamilyOperator {
 public:
  static TreeFamilyOperator make(const System& sys);

  std::size_t size() const { return n_; }
  // out[i] = F(c) for the tree rooted at class index i.
  void apply(const std::vector<double>& c, std::vector<double>& out, double lambda);

 private:
  struct Node {
    std::uint8_t kind;           // 0 leaf, 1 internal p, 2 m
    std::uint32_t cls_idx;       // leaf: class index
    std::uint32_t child_begin;   // into child_ids_
    std::uint32_t child_end;
    ExponentShift shift;         // leaf: absolute coefficient exponent
  };
  int k_ = 0;
  std::size_t n_ = 0;
  std::vector<Node> nodes_;            // parents before children, trees concatenated
  std::vector<std::uint32_t> child_ids_;
  std::vector<std::uint32_t> tree_root_;  // node index of each tree's root
  std::vector<double> values_;         // scratch
};

Feasibility classify_lambda_tree(TreeFamilyOperator& op, double lambda, u64 max_iter = 20000,
                                 double margin = 1e-9);

}  // namespace tribound
