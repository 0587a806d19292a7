#include <doctest.h>

#include "embvan/catalog.hpp"
#include "embvan/cohomology.hpp"
#include "test_util.hpp"

using namespace embvan;
using testutil::P;
using testutil::polys;

namespace {

GradedModulePresentation<PrimeField> full_ring() {
  GradedModulePresentation<PrimeField> S;
  S.target_degrees = {0};
  return S;
}

} // namespace

TEST_CASE("line bundle cohomology closed form") {
  CHECK(line_bundle_cohomology(3, -4, 3) == 1);
  CHECK(line_bundle_cohomology(3, 2, 0) == 10);
  for (int i = 0; i <= 5; ++i)
    CHECK(line_bundle_cohomology(5, -3, i) == 0);
  CHECK(line_bundle_cohomology(1, -2, 1) == 1);
  CHECK(line_bundle_cohomology(2, -5, 2) == 6);  // h^0(O(2)) by Serre duality
}

TEST_CASE("binomial polynomial evaluates at negative arguments") {
  CHECK(binomial_polynomial(2, 3) == 10);
  CHECK(binomial_polynomial(-1, 3) == 0);
  CHECK(binomial_polynomial(-3, 3) == 0);
  CHECK(binomial_polynomial(-4, 3) == -1);
  CHECK(binomial_polynomial(-5, 3) == -4);
}

TEST_CASE("sheaf cohomology examples") {
  auto R4 = testutil::ring(4);
  CHECK(sheaf_cohomology(R4, full_ring(), 3, -4) == 1);
  for (int p = -6; p <= 6; ++p)
    CHECK(sheaf_cohomology(R4, full_ring(), 1, p) == 0);
  // (q^2) for a rank-4 quadric is O(-4); twisted by 1 it is O(-3).
  auto q = P(R4, "x0*x3 - x1*x2");
  GradedIdeal<PrimeField> q2(R4, {R4.mul(q, q)});
  CHECK(ideal_sheaf_cohomology(q2, 1, 1) == 0);
  CHECK(ideal_sheaf_cohomology(q2, 3, 1) == line_bundle_cohomology(3, -3, 3));
  CHECK_THROWS_AS(sheaf_cohomology(R4, full_ring(), 4, 0), std::out_of_range);
}

TEST_CASE("property: full ring agrees with line bundles on small projective spaces") {
  for (int n = 1; n <= 4; ++n) {
    auto R = testutil::ring(n + 1);
    GradedModulePresentation<PrimeField> S;
    S.target_degrees = {0};
    ModuleCohomology<PrimeField> mc(R, free_resolution(R, S));
    for (int p = -8; p <= 8; ++p)
      for (int i = 0; i <= n; ++i)
        CHECK(mc.sheaf_cohomology(i, p) == line_bundle_cohomology(n, p, i));
  }
}

TEST_CASE("property: principal ideal powers reduce to line bundles") {
  auto R4 = testutil::ring(4);
  auto cubic = P(R4, "x0^3 + x1^3 + x2^3 + x3^3");
  GradedIdeal<PrimeField> I(R4, {cubic});
  for (int k = 1; k <= 3; ++k) {
    auto Ik = ideal_power(I, k);
    ModuleCohomology<PrimeField> mc(R4, resolve_ideal(Ik));
    for (int p = -4; p <= 12; ++p)
      for (int i = 0; i <= 3; ++i)
        CHECK(mc.sheaf_cohomology(i, p) == line_bundle_cohomology(3, p - 3 * k, i));
  }
}

TEST_CASE("twisted cubic: Riemann-Roch and Euler characteristic") {
  auto cubic = build_rational_normal_curve(3);
  ModuleCohomology<PrimeField> mc(cubic.ideal.ring(), resolve_ideal(cubic.ideal));
  for (int p = -3; p <= 6; ++p) {
    long long chi = 0;
    for (int i = 0; i <= 3; ++i)
      chi += (i % 2 ? -1 : 1) * mc.sheaf_cohomology(i, p);
    CHECK(mc.hilbert_polynomial(p).get_si() == chi);
    // 0 -> I(p) -> O(p) -> O_C(3p) -> 0 with h^0(O_C(3p)) = 3p + 1 for p >= 0.
    if (p >= 0) {
      CHECK(mc.sheaf_cohomology(0, p) == binomial(p + 3, 3) - (3 * p + 1));
      CHECK(mc.sheaf_cohomology(1, p) == 0);
    }
  }
  // H^1(I_C) = coker(H^0 O -> H^0 O_C) = 0, H^2(I_C(-1)) = H^1(O_C(-3)) = 2.
  CHECK(mc.sheaf_cohomology(2, -1) == 2);
}

TEST_CASE("vanishing scan examples") {
  auto quadric = from_label("segre:2x2");
  auto s1 = vanishing_scan(quadric.ideal, 2, -1, 4, 3, {}, quadric.label);
  CHECK(s1.verdict == Verdict::Pass);
  CHECK(s1.euler_consistent);
  for (int k = 1; k <= 4; ++k) {
    CHECK(s1.table.get(3, k, 2 * k - 4).value_or(0) > 0);
    CHECK(s1.table.get(3, k, 2 * k - 3).value_or(-1) == 0);
  }

  auto g24 = from_label("pluecker:4");
  auto s2 = vanishing_scan(g24.ideal, 2, -3, 4, 2, {}, g24.label);
  CHECK(s2.verdict == Verdict::Pass);
  for (int k = 1; k <= 4; ++k)
    CHECK(s2.table.get(5, k, 2 * k - 6).value_or(0) == line_bundle_cohomology(5, -6, 5));

  auto cubic = from_label("rnc:3");
  auto s3 = vanishing_scan(cubic.ideal, 2, 1, 3, 2, {}, cubic.label);
  CHECK(s3.verdict == Verdict::Pass);
  CHECK(s3.euler_consistent);

  // An e that is too small fails.
  auto s4 = vanishing_scan(quadric.ideal, 2, -2, 2, 1);
  CHECK(s4.verdict == Verdict::Fail);
}

TEST_CASE("vanishing scan reports incomplete under a tight degree cap") {
  auto seg = from_label("segre:2x3");
  ScanOptions opts;
  opts.max_degree = 3;
  auto s = vanishing_scan(seg.ideal, 2, -1, 2, 1, opts);
  CHECK(s.verdict == Verdict::Incomplete);
  CHECK(s.table.powers[0].complete);
  CHECK(!s.table.powers[1].complete);
}

TEST_CASE("serialization of cohomology tables") {
  auto quadric = from_label("segre:2x2");
  auto s = vanishing_scan(quadric.ideal, 2, -1, 1, 0);
  const auto csv = s.table.to_csv();
  CHECK(csv.rfind("k,p,i,dim\n", 0) == 0);
  CHECK(csv.find("1,-1,3,0") != std::string::npos);
  const auto j = s.to_json();
  CHECK(j["verdict"] == "pass");
  CHECK(j["table"]["by_k"]["1"]["window"][0] == -1);
}

TEST_CASE("property: Serre vanishing is observed for catalog ideals") {
  for (const char* label : {"rnc:3", "segre:2x3", "elliptic:4"}) {
    auto v = from_label(label);
    ModuleCohomology<PrimeField> mc(v.ideal.ring(), resolve_ideal(v.ideal));
    bool seen = false;
    for (int p = 0; p <= 8 && !seen; ++p) {
      bool all_zero = true;
      for (int i = 1; i <= v.n; ++i)
        all_zero = all_zero && mc.sheaf_cohomology(i, p) == 0;
      seen = all_zero;
    }
    CHECK(seen);
  }
}
