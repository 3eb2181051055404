#include <doctest.h>

#include <cmath>
#include <string>

#include "tribound/errors.hpp"
#include "tribound/solver.hpp"
#include "tribound/verify.hpp"

using namespace tribound;

namespace {

const Certificate& k2_certificate() {
  static const Certificate cert = [] {
    SearchOptions opts;
    opts.tol = 1e-6;
    return search_lambda(2, opts).cert;
  }();
  return cert;
}

}  // namespace

TEST_CASE("growth bound holds for a = 5 at the certified threshold") {
  BoundCheckReport rep = check_lower_bound(5, k2_certificate(), 15);
  CHECK(rep.pass);
  CHECK(rep.a == 5);
  CHECK(rep.k == 2);
  REQUIRE(rep.rows.size() == 16);
  CHECK(rep.rows[0].y == 0);
  CHECK(rep.rows[0].x == 5);
  CHECK(rep.rows[3].x == 40);
  for (const auto& row : rep.rows) {
    CHECK(row.pass);
    CHECK(row.lhs == pi_a_star(rep.a, row.x));
  }
}

TEST_CASE("counts on the left never shrink as y grows") {
  BoundCheckReport rep = check_lower_bound(11, k2_certificate(), 12);
  CHECK(rep.pass);
  for (size_t i = 1; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].lhs >= rep.rows[i - 1].lhs);
  }
}

TEST_CASE("bound target validation") {
  const Certificate& cert = k2_certificate();
  CHECK_THROWS_AS(check_lower_bound(1, cert, 5), CycleTarget);
  CHECK_THROWS_AS(check_lower_bound(2, cert, 5), CycleTarget);
  CHECK_THROWS_AS(check_lower_bound(7, cert, 5), std::invalid_argument);  // 7 = 1 mod 3
  CHECK_THROWS_AS(check_lower_bound(5, cert, 41), std::invalid_argument);
  CHECK_THROWS_AS(check_lower_bound(5, cert, -1), std::invalid_argument);
  CHECK_THROWS_AS(check_lower_bound(5, cert, 40), BudgetExceeded);  // 5 * 2^40

  Certificate unverified = cert;
  unverified.verified = false;
  CHECK_THROWS_AS(check_lower_bound(5, unverified, 5), std::invalid_argument);
}

TEST_CASE("headline census at small sizes") {
  HeadlineReport rep = check_headline_bound({10, 100, 10000});
  CHECK(rep.pass);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].count == 10);  // everything <= 10 reaches 1
  CHECK(rep.rows[2].count == 10000);
  for (const auto& row : rep.rows) {
    CHECK(row.bound == doctest::Approx(std::pow(double(row.x), 0.84)));
    CHECK(row.pass);
  }
  CHECK_THROWS_AS(check_headline_bound({20'000'000}), BudgetExceeded);
  CHECK_THROWS_AS(check_headline_bound({0}), BudgetExceeded);
}

TEST_CASE("csv rendering") {
  BoundCheckReport rep = check_lower_bound(5, k2_certificate(), 2);
  const std::string csv = format_csv(rep);
  CHECK(csv.find("a,k,lambda,delta1\n") == 0);
  CHECK(csv.find("y,x,count,bound,pass\n") != std::string::npos);
  CHECK(csv.find("0,5,") != std::string::npos);
  CHECK(csv.find("2,20,") != std::string::npos);

  HeadlineReport hr = check_headline_bound({100});
  const std::string hcsv = format_csv(hr);
  CHECK(hcsv.find("x,count,bound,pass\n") == 0);
  CHECK(hcsv.find("100,100,47.8630,1\n") != std::string::npos);
}
