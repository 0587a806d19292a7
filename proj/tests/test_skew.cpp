#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "embvan/linalg.hpp"
#include "embvan/skew.hpp"
#include "test_util.hpp"

using namespace embvan;

namespace {

using Elem = PrimeField::Elem;
using Rows = std::vector<std::vector<Elem>>;

// Naive exterior algebra over k[t]/(t^T): terms keyed by sorted index lists,
// signs found by bubble sort. Independent of the Pfaffian machinery.
using Naive = std::map<std::vector<int>, SeriesRing::Elem>;

Naive naive_wedge(const SeriesRing& R, const Naive& a, const Naive& b) {
  Naive out;
  for (const auto& [s, x] : a)
    for (const auto& [u, y] : b) {
      std::vector<int> idx = s;
      idx.insert(idx.end(), u.begin(), u.end());
      int swaps = 0;
      bool repeated = false;
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j + 1 < idx.size() - i; ++j) {
          if (idx[j] == idx[j + 1])
            repeated = true;
          if (idx[j] > idx[j + 1]) {
            std::swap(idx[j], idx[j + 1]);
            ++swaps;
          }
        }
      if (repeated || std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        continue;
      auto term = R.mul(x, y);
      if (swaps % 2)
        term = R.neg(term);
      auto it = out.find(idx);
      out[idx] = it == out.end() ? term : R.add(it->second, term);
    }
  return out;
}

// alpha^r / r! by repeated wedging; needs r! invertible in the field.
Naive naive_divided_power(const SkewFamily& fam, int r) {
  const SeriesRing R = fam.ring();
  Naive alpha;
  for (int i = 0; i < fam.dim; ++i)
    for (int j = i + 1; j < fam.dim; ++j)
      if (!R.is_zero(fam.entries[i][j]))
        alpha[{i, j}] = fam.entries[i][j];
  Naive acc{{{}, R.one()}};
  Elem fact = 1;
  for (int k = 1; k <= r; ++k) {
    acc = naive_wedge(R, acc, alpha);
    fact = fam.field.mul(fact, static_cast<Elem>(k));
  }
  for (auto& [k, v] : acc)
    v = R.scale(v, fam.field.inv(fact));
  return acc;
}

Mat<PrimeField> form_from_pairs(const PrimeField& F, int n, std::vector<std::pair<int, int>> pairs) {
  Mat<PrimeField> m(n, std::vector<Elem>(n, 0));
  for (auto [i, j] : pairs) {
    m[i][j] = 1;
    m[j][i] = F.neg(1);
  }
  return m;
}

Rows unit_rows(int n, std::vector<int> idx) {
  Rows out;
  for (int i : idx) {
    std::vector<Elem> row(n, 0);
    row[i] = 1;
    out.push_back(row);
  }
  return out;
}

Rows rref_of(const PrimeField& F, const Rows& rows, int ncols) {
  DenseMatrix<PrimeField> m(F, static_cast<int>(rows.size()), ncols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < ncols; ++j)
      m.at(i, j) = rows[i][j];
  const auto piv = rref(F, m);
  Rows out;
  for (std::size_t i = 0; i < piv.size(); ++i) {
    std::vector<Elem> row(ncols);
    for (int j = 0; j < ncols; ++j)
      row[j] = m.at(static_cast<int>(i), j);
    out.push_back(row);
  }
  return out;
}

Mat<PrimeField> scaled_to_first(const PrimeField& F, Mat<PrimeField> m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (m[i][j] != 0) {
        const Elem inv = F.inv(m[i][j]);
        for (auto& row : m)
          for (auto& x : row)
            x = F.mul(x, inv);
        return m;
      }
  return m;
}

// Random normal data with total rank 2l: at each step a random form of a
// random admissible rank on the current subspace, then its kernel.
SkewNormalData random_normal_data(const PrimeField& F, int n, int l, std::mt19937_64& rng) {
  SkewNormalData data;
  data.field = F;
  data.dim = n;
  data.l = l;
  Rows basis;
  for (int i = 0; i < n; ++i)
    basis.push_back(unit_rows(n, {i})[0]);
  int left = l;
  while (left > 0) {
    const int d = static_cast<int>(basis.size());
    const int s = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(left, d / 2)));
    Mat<PrimeField> form;
    while (true) {
      // A J A^T with A a random d x 2s matrix and J the standard symplectic form.
      std::vector<std::vector<Elem>> A(d, std::vector<Elem>(2 * s));
      for (auto& row : A)
        for (auto& x : row)
          x = static_cast<Elem>(rng() % F.characteristic());
      form.assign(d, std::vector<Elem>(d, 0));
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          Elem v = 0;
          for (int q = 0; q < s; ++q)
            v = F.add(v, F.sub(F.mul(A[a][2 * q], A[b][2 * q + 1]),
                               F.mul(A[a][2 * q + 1], A[b][2 * q])));
          form[a][b] = v;
        }
      if (matrix_rank(F, form) == 2 * s)
        break;
    }
    form = scaled_to_first(F, form);
    data.levels.push_back({basis, form, 2 * s, 0});
    left -= s;
    if (left == 0)
      break;
    DenseMatrix<PrimeField> dm(F, d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        dm.at(a, b) = form[a][b];
    Rows next;
    for (const auto& k : null_space(F, dm)) {
      std::vector<Elem> row(n, 0);
      for (int a = 0; a < d; ++a)
        for (int x = 0; x < n; ++x)
          row[x] = F.add(row[x], F.mul(k[a], basis[a][x]));
      next.push_back(row);
    }
    basis = rref_of(F, next, n);
  }
  return data;
}

// g(t)^T alpha g(t) for g = g0 + t g1 + t^2 g2 with g0 invertible.
SkewFamily change_basis(const SkewFamily& fam, std::mt19937_64& rng) {
  const PrimeField& F = fam.field;
  const SeriesRing R = fam.ring();
  const int n = fam.dim;
  Mat<SeriesRing> g;
  while (true) {
    g.assign(n, std::vector<SeriesRing::Elem>(n, R.zero()));
    Mat<PrimeField> g0(n, std::vector<Elem>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        g0[i][j] = static_cast<Elem>(rng() % F.characteristic());
        for (int k = 0; k < std::min(3, fam.precision); ++k)
          g[i][j][k] = k == 0 ? g0[i][j] : static_cast<Elem>(rng() % F.characteristic());
      }
    if (matrix_rank(F, g0) == n)
      break;
  }
  SkewFamily out = SkewFamily::zero(F, n, fam.precision);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto acc = R.zero();
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          acc = R.add(acc, R.mul(R.mul(g[x][a], fam.entries[x][y]), g[y][b]));
      out.entries[a][b] = acc;
    }
  return out;
}

void check_compatible(const SkewFamily& fam, const SkewNormalData& data) {
  for (int r = 1; r <= data.l; ++r)
    CHECK(build_omega(data, r) == wedge_power_limit(fam, r).limit);
}

std::vector<ExteriorVector> omega_tuple(const SkewNormalData& d) {
  std::vector<ExteriorVector> out;
  for (int r = 1; r <= d.l; ++r)
    out.push_back(build_omega(d, r));
  return out;
}

SkewFamily example4() {
  auto fam = SkewFamily::zero(PrimeField(), 4);
  fam.add_term(0, 1, 1, 0);
  fam.add_term(2, 3, 1, 1);
  return fam;
}

SkewFamily example6() {
  auto fam = SkewFamily::zero(PrimeField(), 6);
  fam.add_term(0, 1, 1, 0);
  fam.add_term(2, 3, 1, 1);
  fam.add_term(4, 5, 1, 2);
  return fam;
}

} // namespace

TEST_CASE("series ring arithmetic") {
  SeriesRing R(PrimeField(7), 4);
  auto a = R.add(R.one(), R.monomial(2, 1));  // 1 + 2t
  auto b = R.sub(R.one(), R.monomial(2, 1));  // 1 - 2t
  CHECK(R.mul(a, b) == R.sub(R.one(), R.monomial(4, 2)));
  CHECK(R.valuation(R.monomial(3, 2)) == 2);
  CHECK(R.valuation(R.zero()) == 4);
  CHECK(R.shift_down(R.monomial(5, 3), 2) == R.monomial(5, 1));
  CHECK(R.mul(R.monomial(1, 2), R.monomial(1, 2)) == R.zero());
  CHECK_THROWS(SeriesRing(PrimeField(7), 0));
}

TEST_CASE("family validation and serialization") {
  auto fam = example4();
  CHECK(fam.precision == 8);
  CHECK(fam.l() == 2);
  auto back = SkewFamily::from_json(fam.to_json());
  CHECK(back.entries == fam.entries);
  CHECK(fam.to_json()["entries"].size() == 2);

  auto zero_fibre = SkewFamily::zero(PrimeField(), 3);
  zero_fibre.add_term(0, 1, 1, 1);
  CHECK_THROWS_AS(zero_fibre.validate(), std::invalid_argument);
  auto bad = example4();
  bad.entries[0][1][2] = 5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS(fam.add_term(1, 1, 1, 0));
  CHECK_THROWS(fam.add_term(0, 1, 1, 8));
  CHECK_THROWS(SkewFamily::from_json({{"dimension", 2}, {"field", 4}, {"entries", nlohmann::json::array()}}));
}

TEST_CASE("wedge power limit examples") {
  auto w = wedge_power_limit(example4(), 2);
  CHECK(w.valuation == 1);
  CHECK(w.limit == ExteriorVector{1});

  auto w6 = wedge_power_limit(example6(), 3);
  CHECK(w6.valuation == 3);
  CHECK(w6.limit == ExteriorVector{1});

  // r = 1 is the family itself divided by its minimal entry valuation.
  auto fam = SkewFamily::zero(PrimeField(), 3);
  fam.add_term(0, 2, 4, 0);
  fam.add_term(1, 2, 2, 1);
  auto w1 = wedge_power_limit(fam, 1);
  CHECK(w1.valuation == 0);
  CHECK(w1.limit == normalize_projective(fam.field, {0, 4, 0}));

  CHECK_THROWS_AS(wedge_power_limit(example4(), 3), std::invalid_argument);
  CHECK_THROWS_AS(wedge_power_limit(example4(), 0), std::invalid_argument);
}

TEST_CASE("property: wedge power limit matches a naive exterior expansion") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 5;
    auto fam = SkewFamily::zero(PrimeField(), n, 2 * n + 3);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < 3; ++k)
          if (rng() % 3 == 0)
            fam.add_term(i, j, static_cast<std::int64_t>(rng() % 100) - 50, static_cast<int>(k + trial % 3));
    if (fam.entries[0][1][0] == 0)
      fam.add_term(0, 1, 1, 0);
    const SeriesRing R = fam.ring();
    for (int r = 1; r <= fam.l(); ++r) {
      const auto naive = naive_divided_power(fam, r);
      int v = fam.precision;
      for (const auto& [k, c] : naive)
        v = std::min(v, R.valuation(c));
      const auto w = wedge_power_limit(fam, r);
      CHECK(w.valuation == v);
      ExteriorVector lead;
      for (const auto& s : subsets(n, 2 * r)) {
        auto it = naive.find(s);
        lead.push_back(it == naive.end() ? 0 : it->second[v]);
      }
      CHECK(w.limit == normalize_projective(fam.field, lead));
    }
  }
}

TEST_CASE("divided powers survive small characteristic") {
  // In characteristic 3 the plain square of x1^x2 + x3^x4 + x5^x6 cubed is 6 x123456 = 0.
  PrimeField F(3);
  auto form = form_from_pairs(F, 6, {{0, 1}, {2, 3}, {4, 5}});
  CHECK(divided_power(F, form, 3) == ExteriorVector{1});
  auto d2 = divided_power(F, form, 2);
  CHECK(std::count(d2.begin(), d2.end(), 1u) == 3);
}

TEST_CASE("extraction examples") {
  PrimeField F;
  auto data = extract_normal_data(example4());
  CHECK(data.ranks() == std::vector<int>{2, 2});
  REQUIRE(data.flag().size() == 1);
  CHECK(data.flag()[0] == unit_rows(4, {2, 3}));
  CHECK(data.levels[0].form == form_from_pairs(F, 4, {{0, 1}}));
  CHECK(data.levels[1].form == form_from_pairs(F, 2, {{0, 1}}));
  CHECK(data.levels[1].valuation == 1);

  auto constant = SkewFamily::zero(F, 4);
  constant.add_term(0, 2, 3, 0);
  constant.add_term(1, 3, 5, 0);
  auto c = extract_normal_data(constant);
  CHECK(c.levels.size() == 1);
  CHECK(c.flag().empty());
  CHECK(c.ranks() == std::vector<int>{4});

  auto six = extract_normal_data(example6());
  CHECK(six.ranks() == std::vector<int>{2, 2, 2});
  REQUIRE(six.flag().size() == 2);
  CHECK(six.flag()[0] == unit_rows(6, {2, 3, 4, 5}));
  CHECK(six.flag()[1] == unit_rows(6, {4, 5}));
  CHECK(six.levels[2].valuation == 1);
}

TEST_CASE("extraction uses the orthogonal complement, not the literal restriction") {
  // alpha = x1^x2 + t (x1^x3 + x2^x4): restricting to span(e3, e4) gives 0,
  // yet alpha^(2) = -t^2 x1234, so the second step has rank 2 at valuation 2.
  auto fam = SkewFamily::zero(PrimeField(), 4);
  fam.add_term(0, 1, 1, 0);
  fam.add_term(0, 2, 1, 1);
  fam.add_term(1, 3, 1, 1);
  CHECK(fam.l() == 2);
  auto data = extract_normal_data(fam);
  CHECK(data.ranks() == std::vector<int>{2, 2});
  CHECK(data.levels[1].valuation == 2);
  CHECK(wedge_power_limit(fam, 2).valuation == 2);
  check_compatible(fam, data);
}

TEST_CASE("extraction errors") {
  auto fam = SkewFamily::zero(PrimeField(), 4, 2);
  fam.add_term(0, 1, 1, 0);
  fam.add_term(2, 3, 1, 1);
  fam.entries[2][3][1] = 0;
  fam.entries[3][2][1] = 0;
  // Generic rank 2 at this precision: a single level.
  CHECK(extract_normal_data(fam).ranks() == std::vector<int>{2});

  // Precision too short to see the second block's Schur complement.
  auto tight = SkewFamily::zero(PrimeField(), 4, 2);
  tight.add_term(0, 1, 1, 0);
  tight.add_term(0, 2, 1, 1);
  tight.add_term(1, 3, 1, 1);
  CHECK(tight.l() == 1);
  CHECK(extract_normal_data(tight).ranks() == std::vector<int>{2});
}

TEST_CASE("omega examples") {
  auto data = extract_normal_data(example4());
  CHECK(build_omega(data, 2) == ExteriorVector{1});
  CHECK(build_omega(data, 1) == normalize_projective(data.field, {1, 0, 0, 0, 0, 0}));

  auto six = extract_normal_data(example6());
  const auto w = build_omega(six, 2);
  // x1^x2^x3^x4 is the first 4-subset.
  CHECK(w[0] == 1);
  CHECK(std::count(w.begin(), w.end(), 0u) == static_cast<long>(w.size()) - 1);
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    CHECK(build_omega(six, 2, seed) == w);
  CHECK_THROWS_AS(build_omega(six, 4), std::invalid_argument);
}

TEST_CASE("smoothing examples") {
  PrimeField F;
  auto data = extract_normal_data(example4());
  auto fam = smoothing(data, 3);
  CHECK(extract_normal_data(fam) == data);
  // The t^0 part is the first form itself.
  CHECK(fam.entries[0][1][0] == 1);

  auto constant = SkewFamily::zero(F, 2);
  constant.add_term(0, 1, 1, 0);
  auto cdata = extract_normal_data(constant);
  auto cfam = smoothing(cdata, 9);
  CHECK(cfam.entries == constant.entries);

  auto six = extract_normal_data(example6());
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    CHECK(extract_normal_data(smoothing(six, seed)) == six);
}

TEST_CASE("property: exhaustive round trip, compatibility and injectivity over F_3") {
  PrimeField F(3);
  const std::vector<std::size_t> sizes{1, 1, 13, 364};
  for (int n = 1; n <= 4; ++n) {
    INFO("n = " << n);
    const auto all = enumerate_normal_data(F, n);
    if (n >= 2)
      CHECK(all.size() == sizes[n - 1]);
    std::set<std::vector<ExteriorVector>> seen;
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto& d = all[i];
      const auto fam = smoothing(d, i + 1);
      const auto back = extract_normal_data(fam);
      CHECK(back == d);
      check_compatible(fam, d);
      seen.insert(omega_tuple(d));
    }
    CHECK(seen.size() == all.size());
  }
}

TEST_CASE("property: seeded families at N <= 6 round trip through arbitrary coordinates") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    std::mt19937_64 rng(seed);
    const PrimeField F(seed % 2 ? 3 : 32003);
    const int n = 2 + static_cast<int>(rng() % 5);
    const int l = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n / 2));
    INFO("seed = " << seed << " n = " << n << " l = " << l);
    const auto data = random_normal_data(F, n, l, rng);
    const auto fam = smoothing(data, seed);
    CHECK(fam.l() == l);
    CHECK(extract_normal_data(fam) == data);
    check_compatible(fam, data);

    const auto moved = change_basis(fam, rng);
    const auto d2 = extract_normal_data(moved);
    CHECK(d2.l == l);
    int total = 0;
    for (int r : d2.ranks())
      total += r;
    CHECK(total == 2 * l);
    check_compatible(moved, d2);
    CHECK(extract_normal_data(smoothing(d2, seed + 1000)) == d2);
    for (int r = 1; r <= l; ++r)
      CHECK(build_omega(d2, r, seed) == build_omega(d2, r));
  }
}

TEST_CASE("Pf^2 = det with symbolic entries up to 8 x 8") {
  for (int n = 2; n <= 8; n += 2) {
    auto R = testutil::ring(n * (n - 1) / 2);
    Mat<RingGF> m(n, std::vector<PolyGF>(n, R.zero()));
    int v = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        m[i][j] = R.variable(v++);
        m[j][i] = R.neg(m[i][j]);
      }
    const auto pf = pfaffian(R, m);
    CHECK(R.mul(pf, pf) == determinant(R, m));
  }
}
