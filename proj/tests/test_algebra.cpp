#include <doctest.h>

#include <random>

#include "embvan/ideal.hpp"
#include "embvan/matrix.hpp"
#include "embvan/resolution.hpp"
#include "embvan/serialize.hpp"
#include "test_util.hpp"

using namespace embvan;
using testutil::P;
using testutil::polys;

namespace {

// Brute-force Groebner check: every S-polynomial reduces to zero.
bool all_spairs_reduce(const RingGF& R, const std::vector<PolyGF>& G) {
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j)
      if (!normal_form(R, s_polynomial(R, G[i], G[j]), G).is_zero())
        return false;
  return true;
}

bool same_set(const RingGF& R, std::vector<PolyGF> a, std::vector<PolyGF> b) {
  if (a.size() != b.size())
    return false;
  for (auto& x : a)
    x = R.make_monic(x);
  for (auto& y : b) {
    y = R.make_monic(y);
    if (std::find(a.begin(), a.end(), y) == a.end())
      return false;
  }
  return true;
}

GradedModulePresentation<PrimeField> ideal_pres(const RingGF& R, const std::vector<std::string>& g) {
  return presentation_of(GradedIdeal<PrimeField>(R, polys(R, g)));
}

// d_q ∘ d_{q+1} = 0 as polynomial matrices.
bool composes_to_zero(const RingGF& R, const FreeResolution<PrimeField>& res) {
  for (std::size_t q = 0; q + 1 < res.maps.size(); ++q) {
    auto prod = multiply(R, res.maps[q], res.maps[q + 1]);
    for (const auto& col : prod.cols)
      if (!col.empty())
        return false;
  }
  return true;
}

std::vector<PolyGF> random_forms(const RingGF& R, int count, int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<PolyGF> out;
  const auto monos = monomials_of_degree(R.nvars(), degree);
  for (int i = 0; i < count; ++i) {
    std::vector<Term<PrimeField>> terms;
    for (const auto& m : monos)
      if (rng() % 3 == 0)
        terms.push_back({m, R.field().from_int(coef(rng))});
    auto p = R.normalize(terms);
    if (p.is_zero())
      p = R.term(monos.front(), 1);
    out.push_back(p);
  }
  return out;
}

} // namespace

TEST_CASE("polynomial text round trip") {
  auto R = testutil::ring(3);
  auto f = P(R, "3*x0^2*x1 - x2^3 + 5");
  CHECK(to_text(R, f) == "3*x0^2*x1^1+32002*x2^3+5");
  CHECK(parse_polynomial(R, to_text(R, f)) == f);
  CHECK(to_text(R, R.zero()) == "0");
  CHECK_THROWS(parse_polynomial(R, "x7"));
  auto Q = RingQQ(RationalField(), 2);
  auto g = parse_polynomial(Q, "1/2*x0 +- 3/4*x1");
  CHECK(to_text(Q, g) == "1/2*x0^1+-3/4*x1^1");
  CHECK(ideal_from_json(R, ideal_to_json(R, std::vector<PolyGF>{f})).front() == f);
}

TEST_CASE("groebner basis examples") {
  auto R2 = testutil::ring(2);
  GradedIdeal<PrimeField> xy(R2, polys(R2, {"x0", "x1"}));
  CHECK(same_set(R2, groebner_basis(xy, "grevlex"), polys(R2, {"x0", "x1"})));

  // Hand Buchberger: S(xy, x^2 - y^2) = y^3, and {x^2 - y^2, xy, y^3} is reduced.
  GradedIdeal<PrimeField> I(R2, polys(R2, {"x0*x1", "x0^2 - x1^2"}));
  auto G = groebner_basis(I, "grevlex");
  CHECK(same_set(R2, G, polys(R2, {"x0^2 - x1^2", "x0*x1", "x1^3"})));

  auto R6 = testutil::ring(6);
  auto minors = polys(R6, {"x0*x4 - x1*x3", "x0*x5 - x2*x3", "x1*x5 - x2*x4"});
  GradedIdeal<PrimeField> M(R6, minors);
  auto G6 = groebner_basis(M, "grevlex");
  CHECK(all_spairs_reduce(R6, minors));
  CHECK(same_set(R6, G6, minors));

  CHECK_THROWS_AS(groebner_basis(M, "weird"), std::invalid_argument);
  for (const char* ord : {"lex", "deglex"}) {
    const RingGF Ro(R2.field(), MonomialOrder::parse(2, ord));
    CHECK(all_spairs_reduce(Ro, groebner_basis(I, ord)));
  }
}

TEST_CASE("normal form examples") {
  auto R2 = testutil::ring(2);
  CHECK(normal_form(R2, P(R2, "x0"), polys(R2, {"x0"})).is_zero());
  CHECK(normal_form(R2, P(R2, "x0^2 + x1"), polys(R2, {"x0"})) == P(R2, "x1"));

  auto R9 = testutil::ring(9);
  Mat<RingGF> gen(3, std::vector<PolyGF>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      gen[i][j] = R9.variable(3 * i + j);
  GradedIdeal<PrimeField> I2(R9, minors(R9, gen, 2));
  auto G = groebner_basis(I2, "grevlex");
  CHECK(normal_form(R9, determinant(R9, gen), G).is_zero());
  CHECK(!normal_form(R9, R9.variable(0), G).is_zero());

  auto R3 = testutil::ring(3);
  CHECK_THROWS_AS(normal_form(R2, P(R3, "x2"), polys(R2, {"x0"})), std::invalid_argument);
}

TEST_CASE("ideal power examples") {
  auto R4 = testutil::ring(4);
  GradedIdeal<PrimeField> q(R4, polys(R4, {"x0*x3 - x1*x2"}));
  auto q3 = ideal_power(q, 3);
  REQUIRE(q3.size() == 1);
  CHECK(R4.make_monic(q3.generators()[0]) == R4.make_monic(R4.pow(P(R4, "x0*x3 - x1*x2"), 3)));

  auto R2 = testutil::ring(2);
  auto sq = ideal_power(GradedIdeal<PrimeField>(R2, polys(R2, {"x0", "x1"})), 2);
  CHECK(same_set(R2, sq.generators(), polys(R2, {"x0^2", "x0*x1", "x1^2"})));

  auto R6 = testutil::ring(6);
  GradedIdeal<PrimeField> M(R6, polys(R6, {"x0*x4 - x1*x3", "x0*x5 - x2*x3", "x1*x5 - x2*x4"}));
  auto M2 = ideal_power(M, 2);
  CHECK(M2.size() == 6);
  for (int d : M2.degrees())
    CHECK(d == 4);

  CHECK_THROWS_AS(ideal_power(M, 0), std::invalid_argument);
}

TEST_CASE("ideal power containment property") {
  auto R4 = testutil::ring(4);
  GradedIdeal<PrimeField> I(R4, polys(R4, testutil::twisted_cubic()));
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b) {
      auto Ia = ideal_power(I, a), Ib = ideal_power(I, b), Iab = ideal_power(I, a + b);
      std::vector<PolyGF> prods;
      for (const auto& f : Ia.generators())
        for (const auto& g : Ib.generators())
          prods.push_back(R4.mul(f, g));
      auto Gp = groebner_basis(R4, prods);
      auto Gab = groebner_basis(R4, Iab.generators());
      for (const auto& g : Iab.generators())
        CHECK(normal_form(R4, g, Gp).is_zero());
      for (const auto& p : prods)
        CHECK(normal_form(R4, p, Gab).is_zero());
    }
}

TEST_CASE("syzygy examples") {
  auto R2 = testutil::ring(2);
  auto s = syzygies(R2, ideal_pres(R2, {"x0", "x1"}));
  REQUIRE(s.columns.size() == 1);
  auto& c = s.columns[0];
  CHECK(R2.add(R2.mul(c[0], P(R2, "x0")), R2.mul(c[1], P(R2, "x1"))).is_zero());
  CHECK(R2.degree(c[0]) == 1);

  auto R3 = testutil::ring(3);
  auto s3 = syzygies(R3, ideal_pres(R3, {"x0", "x1", "x2"}));
  CHECK(s3.columns.size() == 3);

  auto R6 = testutil::ring(6);
  auto pres = ideal_pres(R6, {"x0*x4 - x1*x3", "x0*x5 - x2*x3", "x1*x5 - x2*x4"});
  auto s6 = syzygies(R6, pres);
  REQUIRE(s6.columns.size() == 2);
  for (const auto& col : s6.columns) {
    PolyGF acc;
    for (std::size_t r = 0; r < col.size(); ++r) {
      acc = R6.add(acc, R6.mul(col[r], pres.columns[r][0]));
      if (!col[r].is_zero())
        CHECK(R6.degree(col[r]) == 1);
    }
    CHECK(acc.is_zero());
  }
}

TEST_CASE("syzygies of a module with repeated and dependent columns") {
  auto R2 = testutil::ring(2);
  GradedModulePresentation<PrimeField> pres;
  pres.target_degrees = {0, 0};
  pres.columns = {polys(R2, {"x0", "x1"}), polys(R2, {"x0^2", "x0*x1"}), polys(R2, {"x1", "0"})};
  auto s = syzygies(R2, pres);
  // Kernel: (x0, -1, 0) and nothing else independent (rank-2 image of rank 3).
  REQUIRE(s.columns.size() == 1);
  for (int r = 0; r < 2; ++r) {
    PolyGF acc;
    for (std::size_t j = 0; j < 3; ++j)
      acc = R2.add(acc, R2.mul(s.columns[0][j], pres.columns[j][r]));
    CHECK(acc.is_zero());
  }
}

TEST_CASE("free resolution examples") {
  auto R3 = testutil::ring(3);
  auto res = free_resolution(R3, ideal_pres(R3, {"x0", "x1", "x2"}));
  CHECK(res.total_betti() == std::vector<int>{1, 3, 3, 1});
  CHECK(res.twists[1] == std::vector<int>{1, 1, 1});
  CHECK(res.twists[2] == std::vector<int>{2, 2, 2});
  CHECK(res.twists[3] == std::vector<int>{3});
  CHECK(composes_to_zero(R3, res));

  auto R4 = testutil::ring(4);
  auto cubic = free_resolution(R4, ideal_pres(R4, testutil::twisted_cubic()));
  CHECK(cubic.total_betti() == std::vector<int>{1, 3, 2});
  CHECK(cubic.twists[2] == std::vector<int>{3, 3});
  CHECK(composes_to_zero(R4, cubic));

  auto principal = free_resolution(R4, ideal_pres(R4, {"x0*x3 - x1*x2"}));
  CHECK(principal.length() == 1);
}

TEST_CASE("resolution of an ideal as a module") {
  auto R4 = testutil::ring(4);
  GradedIdeal<PrimeField> I(R4, polys(R4, testutil::twisted_cubic()));
  auto res = resolve_ideal(I);
  CHECK(res.total_betti() == std::vector<int>{3, 2});
  for (int d = 0; d < 8; ++d)
    CHECK(hilbert_function_from_resolution(res, 4, d) ==
          static_cast<long long>(binomial(d + 3, 3)) - (d == 0 ? 1 : 3 * d + 1));
}

TEST_CASE("hilbert function examples") {
  auto R3 = testutil::ring(3);
  GradedModulePresentation<PrimeField> S3;
  S3.target_degrees = {0};
  CHECK(hilbert_function(R3, S3, 2) == 6);

  auto R4 = testutil::ring(4);
  auto cubic = ideal_pres(R4, testutil::twisted_cubic());
  for (int d = 1; d <= 8; ++d)
    CHECK(hilbert_function(R4, cubic, d) == 3 * d + 1);
  CHECK(hilbert_function(R4, ideal_pres(R4, {"x0*x3 - x1*x2"}), 2) == 9);
}

TEST_CASE("property: random ideals give Groebner bases, exact resolutions, matching Hilbert functions") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + trial % 3;
    auto R = testutil::ring(n);
    const int count = 2 + trial % 3;
    std::vector<PolyGF> gens;
    for (int i = 0; i < count; ++i) {
      auto f = random_forms(R, 1, 1 + (i + trial) % 3, rng);
      gens.push_back(f[0]);
    }
    GradedIdeal<PrimeField> I(R, gens);
    auto G = groebner_basis(R, I.generators());
    CHECK(all_spairs_reduce(R, G));
    for (const auto& g : I.generators())
      CHECK(normal_form(R, g, G).is_zero());
    auto pres = presentation_of(I);
    auto res = free_resolution(R, pres);
    CHECK(res.length() <= n);
    CHECK(composes_to_zero(R, res));
    for (int d = 0; d <= 7; ++d)
      CHECK(hilbert_function_from_initial(R, pres, d) ==
            hilbert_function_from_resolution(res, n, d));
  }
}

TEST_CASE("module resolutions stay exact on presentations with several components") {
  auto R3 = testutil::ring(3);
  GradedModulePresentation<PrimeField> pres;
  pres.target_degrees = {0, 1};
  pres.columns = {polys(R3, {"x0^2", "x1"}), polys(R3, {"x1*x2", "x2"}), polys(R3, {"x0*x1", "0"}),
                  polys(R3, {"0", "x0^2"})};
  auto res = free_resolution(R3, pres);
  CHECK(composes_to_zero(R3, res));
  for (int d = 0; d <= 7; ++d)
    CHECK(hilbert_function(R3, pres, d) >= 0);
}

TEST_CASE("pfaffian and determinant conventions") {
  auto R = testutil::ring(6);
  Mat<RingGF> two{{R.zero(), R.variable(0)}, {R.neg(R.variable(0)), R.zero()}};
  CHECK(pfaffian(R, two) == R.variable(0));
  Mat<RingGF> m4(4, std::vector<PolyGF>(4));
  int v = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      m4[i][j] = R.variable(v++);
      m4[j][i] = R.neg(m4[i][j]);
    }
  // a=x0 (12), b=x1 (13), c=x2 (14), d=x3 (23), e=x4 (24), f=x5 (34): af - be + cd.
  auto pf = pfaffian(R, m4);
  CHECK(pf == P(R, "x0*x5 - x1*x4 + x2*x3"));
  CHECK(R.mul(pf, pf) == determinant(R, m4));
  CHECK_THROWS(pfaffian(R, Mat<RingGF>(3, std::vector<PolyGF>(3))));

  PrimeField F;
  Mat<PrimeField> blocks(4, std::vector<std::uint32_t>(4, 0));
  blocks[0][1] = 5;
  blocks[1][0] = F.neg(5);
  blocks[2][3] = 7;
  blocks[3][2] = F.neg(7);
  CHECK(pfaffian(F, blocks) == 35);
}
