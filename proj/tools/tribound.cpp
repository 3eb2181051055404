// Command-line front end: builds systems, eliminates, emits programs, runs
// the lambda search, verifies certificates, and reproduces the survey tables.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tribound/certificate.hpp>
#include <tribound/eliminate.hpp>
#include <tribound/errors.hpp>
#include <tribound/lp.hpp>
#include <tribound/solver.hpp>
#include <tribound/system.hpp>
#include <tribound/tree.hpp>
#include <tribound/verify.hpp>

namespace {

using namespace tribound;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct KRange {
  int lo = 2, hi = 2;
};

KRange parse_k_range(const std::string& s) {
  KRange r;
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    r.lo = r.hi = std::stoi(s);
  } else {
    r.lo = std::stoi(s.substr(0, dots));
    r.hi = std::stoi(s.substr(dots + 2));
  }
  if (r.lo < 2 || r.hi < r.lo) throw CLI::ValidationError("--k-range", "expected <lo>..<hi>, lo >= 2");
  return r;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

int cmd_build_system(int k, const std::string& emit) {
  const System sys = build_system(k);
  std::ostringstream out;
  for (const auto& t : sys.trees) out << serialize(t) << '\n';
  write_or_print(out.str(), emit);
  return 0;
}

int cmd_eliminate(int k, const std::string& order, const std::string& emit, bool stats,
                  bool allow_huge) {
  if (k >= 5) {
    if (!allow_huge) {
      std::cerr << "eliminate: k >= 5 exceeds the in-memory budget; pass --allow-huge to run the "
                   "streaming probe\n";
      return kExitUsage;
    }
    // Streaming: counts leaves and depth per class without materializing.
    std::cout << "k,class,depth,literals,exhausted\n";
    for (u64 m : classes(k)) {
      if (m % 9 != 8) continue;  // only the D3 trees blow up; others are tiny
      const ProbeResult pr = probe_elimination(k, m, 226, 1'000'000'000);
      std::cout << k << ',' << m << ',' << pr.depth << ',' << pr.literals << ','
                << (pr.exhausted ? 1 : 0) << '\n';
    }
    return 0;
  }
  EliminationOptions opts;
  opts.order = order == "dfs" ? ElimOrder::DFS : ElimOrder::BFS;
  const System sys = eliminate_system(k, opts);
  if (stats) {
    std::ostringstream out;
    out << "k,class,depth,literals\n";
    for (const auto& t : sys.trees) {
      const ExpansionStats st = tribound::stats(t);
      out << k << ',' << t.root().cls << ',' << st.depth << ',' << st.literals << '\n';
    }
    std::cout << out.str();
  }
  if (!emit.empty() || !stats) {
    std::ostringstream out;
    for (const auto& t : sys.trees) out << serialize(t) << '\n';
    write_or_print(out.str(), emit);
  }
  return 0;
}

int cmd_build_lp(int k, const std::string& family, const std::string& emit) {
  const LinearProgram lp =
      family == "el" ? build_lp_el(eliminate_system(k)) : build_lp_nt(k);
  write_or_print(emit_lp(lp), emit);
  return 0;
}

int cmd_search_lambda(int k, double tol, u64 max_iter, unsigned precision_bits, int threads,
                      const std::string& emit, const std::string& checkpoint) {
  SearchOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  opts.precision_bits = precision_bits;
  opts.threads = threads;
  if (!checkpoint.empty()) {
    std::ifstream in(checkpoint);
    double lo = 0, hi = 0;
    if (in >> lo >> hi) {
      opts.resume_lo = lo;
      opts.resume_hi = hi;
      std::fprintf(stderr, "resuming bracket [%.17g, %.17g]\n", lo, hi);
    }
    opts.on_step = [&checkpoint](int, double lo2, double hi2) {
      std::ofstream out(checkpoint);
      out.precision(17);
      out << lo2 << ' ' << hi2 << '\n';
    };
  }
  const LambdaSearchResult r = search_lambda(k, opts);
  std::cout << "k,gamma,lambda,cmax,cbar_k,cbar_km1,diff\n" << format_summary_row(r) << '\n';
  if (!emit.empty()) save_certificate(r.cert, emit);
  return 0;
}

int cmd_verify(const std::string& cert_path, const std::string& family) {
  std::ifstream probe(cert_path);
  if (!probe) {
    std::cerr << "verify: cannot read " << cert_path << '\n';
    return kExitUsage;
  }
  probe.close();
  Certificate cert = load_certificate(cert_path);
  const Family fam = family.empty() ? cert.family : (family == "el" ? Family::EL : Family::NT);
  const LinearProgram lp =
      fam == Family::EL ? build_lp_el(eliminate_system(cert.k)) : build_lp_nt(cert.k);
  const CheckResult res = check_certificate(lp, cert);
  if (res.verified) {
    std::cout << "verified: k=" << cert.k << " lambda=" << cert.lambda << " ("
              << lp.constraints.size() << " rows)\n";
    return 0;
  }
  std::cout << "FAILED at constraint " << res.failed_constraint << ": " << res.detail << '\n';
  return kExitVerifyFailed;
}

int cmd_table1(const KRange& range) {
  std::cout << "k,depth,literals\n";
  for (int k = range.lo; k <= range.hi; ++k) {
    const System sys = eliminate_system(k);
    int depth = 0;
    u64 literals = 0;
    for (const auto& t : sys.trees) {
      const ExpansionStats st = stats(t);
      depth = std::max(depth, st.depth);
      literals = std::max(literals, st.literals);
    }
    std::cout << k << ',' << depth << ',' << literals << '\n';
  }
  return 0;
}

int cmd_table2(const KRange& range, double tol, int threads, const std::string& out_path,
               const std::string& cert_dir) {
  std::ostringstream out;
  out << "k,gamma,lambda,cmax,cbar_k,cbar_km1,diff\n";
  for (int k = range.lo; k <= range.hi; ++k) {
    SearchOptions opts;
    opts.tol = tol;
    opts.threads = threads;
    const LambdaSearchResult r = search_lambda(k, opts);
    if (!averaged_inequality_holds(r)) {
      std::cerr << "table2: averaged inequality failed at k=" << k << '\n';
      return kExitVerifyFailed;
    }
    out << format_summary_row(r) << '\n';
    if (!cert_dir.empty()) {
      save_certificate(r.cert, cert_dir + "/k" + std::to_string(k) + ".cert");
    }
  }
  write_or_print(out.str(), out_path);
  return 0;
}

int cmd_verify_bound(u64 a, const std::string& cert_path, int ymax) {
  std::ifstream probe(cert_path);
  if (!probe) {
    std::cerr << "verify-bound: cannot read " << cert_path << '\n';
    return kExitUsage;
  }
  probe.close();
  const Certificate cert = load_certificate(cert_path);
  const BoundCheckReport rep = check_lower_bound(a, cert, ymax);
  std::cout << format_csv(rep);
  return rep.pass ? 0 : kExitVerifyFailed;
}

int cmd_verify_headline(const std::string& xs) {
  std::vector<u64> values;
  std::stringstream ss(xs);
  std::string item;
  while (std::getline(ss, item, ',')) {
    values.push_back(static_cast<u64>(std::stod(item)));
  }
  if (values.empty()) throw CLI::ValidationError("--x", "expected comma-separated values");
  const HeadlineReport rep = check_headline_bound(values);
  std::cout << format_csv(rep);
  return rep.pass ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"difference-inequality pipeline for 3x+1 lower bounds"};
  app.require_subcommand(1);

  int k = 2, ymax = 15, threads = 1;
  u64 a = 5, max_iter = 100000;
  unsigned precision_bits = 64;
  double tol = 1e-6;
  std::string emit, order = "bfs", family, krange = "2..4", out_path, cert_path, checkpoint,
              xs = "1e4,1e5,1e6", cert_dir;
  bool stats = false, allow_huge = false;

  auto* c_build = app.add_subcommand("build-system", "construct the base inequality trees");
  c_build->add_option("--k", k, "congruence level")->required()->check(CLI::Range(2, 20));
  c_build->add_option("--emit", emit, "output path (default stdout)");

  auto* c_elim = app.add_subcommand("eliminate", "back-substitute away advanced terms");
  c_elim->add_option("--k", k)->required()->check(CLI::Range(2, 20));
  c_elim->add_option("--order", order)->check(CLI::IsMember({"bfs", "dfs"}));
  c_elim->add_option("--emit", emit);
  c_elim->add_flag("--stats", stats, "print k,class,depth,literals CSV");
  c_elim->add_flag("--allow-huge", allow_huge, "k >= 5: streaming depth/literal probe");

  auto* c_lp = app.add_subcommand("build-lp", "emit the parametric linear program");
  c_lp->add_option("--k", k)->required()->check(CLI::Range(2, 20));
  c_lp->add_option("--family", family)->required()->check(CLI::IsMember({"nt", "el"}));
  c_lp->add_option("--emit", emit);

  auto* c_search = app.add_subcommand("search-lambda", "bisect the feasibility boundary");
  c_search->add_option("--k", k)->required()->check(CLI::Range(2, 20));
  c_search->add_option("--tol", tol);
  c_search->add_option("--max-iter", max_iter);
  c_search->add_option("--precision-bits", precision_bits);
  c_search->add_option("--threads", threads);
  c_search->add_option("--emit", emit, "certificate output path");
  c_search->add_option("--checkpoint", checkpoint, "bracket persistence file (resume if present)");

  auto* c_verify = app.add_subcommand("verify", "re-check a certificate against its program");
  c_verify->add_option("--cert", cert_path)->required();
  c_verify->add_option("--family", family)->check(CLI::IsMember({"nt", "el"}));

  auto* c_t1 = app.add_subcommand("table1", "eliminated-system size statistics");
  c_t1->add_option("--k-range", krange);

  auto* c_t2 = app.add_subcommand("table2", "lambda search summary rows");
  c_t2->add_option("--k-range", krange)->required();
  c_t2->add_option("--tol", tol);
  c_t2->add_option("--threads", threads);
  c_t2->add_option("--out", out_path, "CSV path (default stdout)");
  c_t2->add_option("--cert-dir", cert_dir, "directory for per-k certificates");

  auto* c_bound = app.add_subcommand("verify-bound", "counting bound vs. exact trajectory counts");
  c_bound->add_option("--a", a)->required();
  c_bound->add_option("--cert", cert_path)->required();
  c_bound->add_option("--ymax", ymax);

  auto* c_head = app.add_subcommand("verify-headline", "pi_1(x) >= x^0.84 at finite x");
  c_head->add_option("--x", xs, "comma-separated x values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (c_build->parsed()) return cmd_build_system(k, emit);
    if (c_elim->parsed()) return cmd_eliminate(k, order, emit, stats, allow_huge);
    if (c_lp->parsed()) return cmd_build_lp(k, family, emit);
    if (c_search->parsed())
      return cmd_search_lambda(k, tol, max_iter, precision_bits, threads, emit, checkpoint);
    if (c_verify->parsed()) return cmd_verify(cert_path, family);
    if (c_t1->parsed()) return cmd_table1(parse_k_range(krange));
    if (c_t2->parsed()) return cmd_table2(parse_k_range(krange), tol, threads, out_path, cert_dir);
    if (c_bound->parsed()) return cmd_verify_bound(a, cert_path, ymax);
    if (c_head->parsed()) return cmd_verify_headline(xs);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  }
  return kExitUsage;
}
