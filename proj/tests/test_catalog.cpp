#include <doctest.h>

#include <random>

#include "embvan/catalog.hpp"
#include "test_util.hpp"

using namespace embvan;
using testutil::P;

TEST_CASE("determinantal constructors") {
  auto q = build_determinantal(EmbeddingCase::generic(2, 2));
  CHECK(q.n == 3);
  CHECK(q.ideal.size() == 1);
  CHECK(q.codim == 1);

  auto s = build_determinantal(EmbeddingCase::generic(2, 3));
  CHECK(s.n == 5);
  CHECK(s.ideal.size() == 3);
  CHECK(s.codim == 2);

  auto g = build_determinantal(EmbeddingCase::skew(4));
  CHECK(g.n == 5);
  REQUIRE(g.ideal.size() == 1);
  // Coordinates (01,02,03,12,13,23) = x0..x5: af - be + cd.
  const auto& R = g.ideal.ring();
  CHECK(R.make_monic(g.ideal.generators()[0]) ==
        R.make_monic(P(R, "x0*x5 - x1*x4 + x2*x3")));
  auto M = universal_matrix(EmbeddingCase::skew(4), R);
  auto pf = pfaffian(R, M);
  CHECK(R.mul(pf, pf) == determinant(R, M));

  auto v = build_determinantal(EmbeddingCase::symmetric(3));
  CHECK(v.n == 5);
  CHECK(v.ideal.size() == 6);
  CHECK(v.codim == 3);

  CHECK_THROWS(EmbeddingCase::generic(3, 2));
  CHECK_THROWS(EmbeddingCase::skew(3));
  CHECK_THROWS(EmbeddingCase::symmetric(1));
}

TEST_CASE("degeneracy loci") {
  auto g33 = build_degeneracy_locus(EmbeddingCase::generic(3, 3), 3);
  REQUIRE(g33.size() == 1);
  CHECK(g33.degrees() == std::vector<int>{3});

  auto s6 = build_degeneracy_locus(EmbeddingCase::skew(6), 3);
  REQUIRE(s6.size() == 1);
  const auto& R = s6.ring();
  auto M = universal_matrix(EmbeddingCase::skew(6), R);
  auto pf = s6.generators()[0];
  CHECK(R.mul(pf, pf) == determinant(R, M));

  auto sym = build_degeneracy_locus(EmbeddingCase::symmetric(3), 2);
  CHECK(sym.size() == 6);

  CHECK_THROWS(build_degeneracy_locus(EmbeddingCase::skew(6), 4));
  CHECK_THROWS(build_degeneracy_locus(EmbeddingCase::generic(2, 3), 3));
}

TEST_CASE("codim_delta formulas") {
  CHECK(codim_delta(EmbeddingCase::generic(3, 4), 2) == 6);
  CHECK(codim_delta(EmbeddingCase::symmetric(4), 2) == 6);
  CHECK(codim_delta(EmbeddingCase::skew(6), 2) == 6);
}

TEST_CASE("property: measured codimension of degeneracy loci matches the formula") {
  std::vector<EmbeddingCase> cases = {
      EmbeddingCase::generic(2, 2), EmbeddingCase::generic(2, 3), EmbeddingCase::generic(2, 4),
      EmbeddingCase::generic(2, 5), EmbeddingCase::generic(3, 3), EmbeddingCase::symmetric(2),
      EmbeddingCase::symmetric(3),  EmbeddingCase::symmetric(4),  EmbeddingCase::skew(4),
      EmbeddingCase::skew(5)};
  for (const auto& c : cases) {
    if (c.n() > 9)
      continue;
    for (int i = 2; i <= c.max_index(); ++i) {
      INFO(c.name() << " i=" << i);
      CHECK(measured_codimension(build_degeneracy_locus(c, i)) == codim_delta(c, i));
    }
  }
}

TEST_CASE("curves") {
  auto cubic = build_curve(0, 3);
  CHECK(cubic.ideal.size() == 3);
  CHECK(cubic.n == 3);
  auto conic = build_curve(0, 2);
  CHECK(conic.ideal.size() == 1);

  auto e4 = build_curve(1, 4, 7);
  CHECK(e4.ideal.size() == 2);
  CHECK(e4.ideal.degrees() == std::vector<int>{2, 2});
  CHECK(measured_codimension(e4.ideal) == 2);

  auto e5 = build_curve(1, 5, 7);
  CHECK(e5.n == 4);
  CHECK(e5.ideal.size() == 5);
  CHECK(measured_codimension(e5.ideal) == 3);
  CHECK(curve_is_smooth(e5.ideal, 3));

  // A singular curve is rejected: the nodal plane cubic x0 x2^2 = x1^2 (x1 + x0) in P^2.
  auto R3 = testutil::ring(3);
  GradedIdeal<PrimeField> nodal(R3, {P(R3, "x0*x2^2 - x1^3 - x0*x1^2")});
  CHECK(!curve_is_smooth(nodal, 1));
  GradedIdeal<PrimeField> smooth(R3, {P(R3, "x0^3 + x1^3 + x2^3")});
  CHECK(curve_is_smooth(smooth, 1));

  CHECK_THROWS(build_curve(2, 5));
  CHECK_THROWS(build_curve(1, 6));
}

TEST_CASE("labels and listing") {
  CHECK(from_label("segre:2x3").n == 5);
  CHECK(from_label("veronese:3").codim == 3);
  CHECK(from_label("pluecker:5").n == 9);
  CHECK(from_label("rnc:4").ideal.size() == 6);
  CHECK(from_label("elliptic:4").genus == 1);
  CHECK_THROWS(from_label("bogus:3"));
  CHECK_THROWS(from_label("segre:2y3"));
  CHECK(catalog_listing().size() >= 10);
}

TEST_CASE("multiplicity examples") {
  // xy at the origin of the chart x2 = 1.
  auto R3 = testutil::ring(3);
  std::vector<std::uint32_t> pt{0, 0, 1};
  CHECK(multiplicity_at_point(R3, P(R3, "x0*x1"), pt) == 2);
  auto R2 = testutil::ring(2);
  CHECK(multiplicity_at_point(R2, P(R2, "x0*x1"), std::vector<std::uint32_t>{0, 1}) == 1);
  CHECK(multiplicity_at_point(R3, P(R3, "x0 + x1"), std::vector<std::uint32_t>{1, 0, 0}) == 0);

  auto c = EmbeddingCase::generic(3, 3);
  RingGF R9(PrimeField(), 9);
  auto det = determinant(R9, universal_matrix(c, R9));
  auto x = sample_rank_point(c, 1, 11);
  CHECK(multiplicity_at_point(R9, det, x) == 2);

  auto sk = EmbeddingCase::skew(6);
  RingGF R15(PrimeField(), 15);
  auto pf6 = pfaffian(R15, universal_matrix(sk, R15));
  CHECK(multiplicity_at_point(R15, pf6, sample_rank_point(sk, 2, 5)) == 2);
}

TEST_CASE("sample_rank_point produces exact ranks") {
  PrimeField F;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CHECK(rank_at(EmbeddingCase::generic(3, 3), F, sample_rank_point(EmbeddingCase::generic(3, 3), 1, seed)) == 1);
    CHECK(rank_at(EmbeddingCase::skew(6), F, sample_rank_point(EmbeddingCase::skew(6), 2, seed)) == 2);
    CHECK(rank_at(EmbeddingCase::symmetric(4), F, sample_rank_point(EmbeddingCase::symmetric(4), 2, seed)) == 2);
  }
  CHECK_THROWS(sample_rank_point(EmbeddingCase::skew(6), 3, 1));
  CHECK_THROWS(sample_rank_point(EmbeddingCase::generic(2, 3), 3, 1));
}

TEST_CASE("property: Pf^2 = det on sampled skew matrices and sub-Pfaffians detect rank") {
  PrimeField F;
  std::mt19937_64 rng(99);
  for (int size = 2; size <= 8; size += 2) {
    for (int trial = 0; trial < 5; ++trial) {
      Mat<PrimeField> m(size, std::vector<std::uint32_t>(size, 0));
      for (int i = 0; i < size; ++i)
        for (int j = i + 1; j < size; ++j) {
          m[i][j] = static_cast<std::uint32_t>(rng() % F.characteristic());
          m[j][i] = F.neg(m[i][j]);
        }
      const auto pf = pfaffian(F, m);
      CHECK(F.mul(pf, pf) == determinant(F, m));
    }
  }
  auto c = EmbeddingCase::skew(6);
  for (int rank = 2; rank <= 6; rank += 2)
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      auto x = sample_rank_point(c, rank, seed);
      auto m = matrix_at(c, F, x);
      for (int i = 1; i <= 3; ++i) {
        const auto pfs = sub_pfaffians(F, m, i);
        const bool any_nonzero =
            std::any_of(pfs.begin(), pfs.end(), [](auto v) { return v != 0; });
        CHECK(any_nonzero == (rank >= 2 * i));
      }
    }
}
