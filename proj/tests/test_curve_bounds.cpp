#include <doctest.h>

#include "embvan/curve_bounds.hpp"

using namespace embvan;

namespace {

mpq_class q(long a, long b) {
  mpq_class v(a, b);
  v.canonicalize();
  return v;
}

// Brute-force oracle: tries many rational epsilon' values in (0, cap],
// including every multiple of 1/(12(d-4)) and the cap itself.
bool oracle_satisfiable(int g, int d, int k, int p) {
  const mpq_class cap = q(d + g - 5, d - 4);
  if (sgn(cap) <= 0)
    return false;
  std::vector<mpq_class> eps{cap};
  for (long j = 1; q(j, 12 * (d - 4)) <= cap; ++j)
    eps.push_back(q(j, 12 * (d - 4)));
  for (const auto& e : eps) {
    const mpq_class li = p + d * e, ri = 2 * (k - 1 + (d - 2) * e);
    const mpq_class lii = k - 1 + (d - 2) * e, rii = q(2 * g - 2, d - 4);
    if (li >= ri && lii >= rii && (li > ri || lii > rii))
      return true;
  }
  return false;
}

} // namespace

TEST_CASE("log canonical classes on the blown-up curve") {
  CHECK(curve_lc_class(0, 5, CurveClassVariant::A) == DivisorClass(4, -2));
  CHECK(curve_lc_class(1, 4, CurveClassVariant::B) == DivisorClass(4, -2));
  CHECK(curve_lc_class(2, 6, CurveClassVariant::C) == DivisorClass(9, -6));
  CHECK(curve_lc_class(2, 6, CurveClassVariant::C).to_string() == "9H - 6E");
  CHECK_THROWS(curve_lc_class(0, 5, CurveClassVariant::B));
  CHECK_THROWS(curve_lc_class(2, 4, CurveClassVariant::C));
  CHECK_THROWS(curve_lc_class(1, 2, CurveClassVariant::A));
}

TEST_CASE("low genus bound") {
  CHECK(low_genus_bound(0, 5) == 1);
  CHECK(low_genus_bound(1, 4) == 1);
  CHECK(low_genus_bound(1, 5) == 1);
  CHECK(curve_lc_class(1, 5, CurveClassVariant::B) == DivisorClass(5, -3));
  CHECK_THROWS(low_genus_bound(2, 6));
  CHECK_THROWS(low_genus_bound(0, 3));
}

TEST_CASE("property: low genus classes equal (n+1)H - (n-1)E for every d") {
  for (int d = 4; d <= 60; ++d) {
    const int n0 = d - 2, n1 = d - 1;
    CHECK(curve_lc_class(0, d, CurveClassVariant::A) == DivisorClass(n0 + 1, -(n0 - 1)));
    CHECK(curve_lc_class(1, d, CurveClassVariant::B) == DivisorClass(n1 + 1, -(n1 - 1)));
  }
}

TEST_CASE("nef and big conditions") {
  auto r = conditions_check({2, 6, 3, 5, q(1, 2)});
  CHECK(r.holds_i);
  CHECK(!r.strict_i);
  CHECK(r.strict_ii);
  CHECK(r.sufficient);

  auto both = conditions_check({10, 5, 16, 31, 1});
  CHECK(both.holds_i);
  CHECK(both.holds_ii);
  CHECK(!both.strict_i);
  CHECK(!both.strict_ii);
  CHECK(!both.sufficient);

  CHECK_THROWS(conditions_check({2, 4, 3, 5, q(1, 2)}));
  CHECK_THROWS(conditions_check({2, 6, 3, 5, 0}));
  CHECK_THROWS(conditions_check({2, 6, 3, 5, 2}));
}

TEST_CASE("degree threshold") {
  CHECK(degree_threshold(1) == 5);
  CHECK(degree_threshold(2) == 5);
  CHECK(degree_threshold(10) == 10);
  for (int g = 0; g <= 50; ++g) {
    int d = 5;
    while (3 * d <= 2 * g + 8)
      ++d;
    CHECK(degree_threshold(g) == d);
  }
}

TEST_CASE("exception region examples") {
  CHECK(exception_region(2, 5).empty());
  CHECK(exception_region(1, 5).empty());
  CHECK(exception_region(0, 5).empty());
  auto reg = exception_region(10, 5);
  CHECK(!reg.empty());
  CHECK(reg.contains(16, 31));
  CHECK(!reg.contains(17, 33));
  CHECK(reg.contains(3, 5));
  int max_k_a0 = 0;
  for (const auto& [k, p] : reg.cells)
    if (p == 2 * k - 1)
      max_k_a0 = std::max(max_k_a0, k);
  CHECK(max_k_a0 == 16);
  CHECK(reg.to_csv().rfind("k,p_min_failing,p_max_failing\n", 0) == 0);
  CHECK_THROWS(exception_region(3, 4));
}

TEST_CASE("property: exception region matches a brute-force epsilon scan") {
  for (int g = 2; g <= 14; ++g)
    for (int d = 5; d <= 9; ++d) {
      const auto reg = exception_region(g, d);
      for (int k = 3; k <= 45; ++k)
        for (int p = 2 * k - 1; p <= 2 * k - 1 + d + g + 3; ++p) {
          INFO("g=" << g << " d=" << d << " k=" << k << " p=" << p);
          CHECK(reg.contains(k, p) == !oracle_satisfiable(g, d, k, p));
        }
    }
}

TEST_CASE("property: region empty exactly above the threshold, and closed upward in p") {
  for (int g = 0; g <= 30; ++g)
    for (int d = 5; d <= 12; ++d) {
      const auto reg = exception_region(g, d);
      CHECK(reg.empty() == (d >= degree_threshold(g)));
      for (const auto& row : reg.rows) {
        CHECK(row.p_min == 2 * row.k - 1);
        for (int p = row.p_min; p <= row.p_max; ++p)
          CHECK(reg.contains(row.k, p));
        for (int p = row.p_max + 1; p <= row.p_max + 20; ++p)
          CHECK(!reg.contains(row.k, p));
      }
    }
}
