#include "embvan/skew.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>

#include "embvan/linalg.hpp"

namespace embvan {

namespace {

using Elem = PrimeField::Elem;
using Rows = std::vector<std::vector<Elem>>;

constexpr int kMaxSkewDim = 20;

// Pfaffians of every principal submatrix, indexed by the bitmask of its
// rows; odd masks hold zero. Expansion along the lowest index, as in pfaffian().
template <class R>
std::vector<typename R::Elem> all_pfaffians(const R& ring, const Mat<R>& m) {
  const int n = static_cast<int>(m.size());
  if (n > kMaxSkewDim)
    throw std::invalid_argument("skew form dimension too large");
  const std::size_t size = std::size_t{1} << n;
  std::vector<typename R::Elem> pf(size, ring.zero());
  pf[0] = ring.one();
  for (std::uint32_t mask = 1; mask < size; ++mask) {
    if (std::popcount(mask) % 2 != 0)
      continue;
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(1u << i);
    auto acc = ring.zero();
    int pos = 0;
    for (std::uint32_t r = rest; r != 0; r &= r - 1, ++pos) {
      const int j = std::countr_zero(r);
      const auto& a = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const auto& sub = pf[rest & ~(1u << j)];
      if (ring.is_zero(a) || ring.is_zero(sub))
        continue;
      auto term = ring.mul(a, sub);
      acc = pos % 2 ? ring.sub(acc, term) : ring.add(acc, term);
    }
    pf[mask] = std::move(acc);
  }
  return pf;
}

std::uint32_t mask_of(const std::vector<int>& s) {
  std::uint32_t m = 0;
  for (int i : s)
    m |= 1u << i;
  return m;
}

// Exterior algebra elements keyed by the bitmask of the basis monomial.
using Exterior = std::map<std::uint32_t, Elem>;

Exterior wedge(const PrimeField& F, const Exterior& a, const Exterior& b) {
  Exterior out;
  for (const auto& [s, x] : a)
    for (const auto& [u, y] : b) {
      if (s & u)
        continue;
      // Sorting x_S ^ x_U costs one transposition per pair (s in S, u in U), s > u.
      int swaps = 0;
      for (std::uint32_t r = u; r != 0; r &= r - 1)
        swaps += std::popcount(s >> (std::countr_zero(r) + 1));
      Elem c = F.mul(x, y);
      if (swaps % 2)
        c = F.neg(c);
      auto& slot = out[s | u];
      slot = F.add(slot, c);
      if (slot == 0)
        out.erase(s | u);
    }
  return out;
}

Exterior divided_power_map(const PrimeField& F, const Mat<PrimeField>& form, int r) {
  const auto pf = all_pfaffians(F, form);
  Exterior out;
  for (std::uint32_t mask = 0; mask < pf.size(); ++mask)
    if (std::popcount(mask) == 2 * r && pf[mask] != 0)
      out.emplace(mask, pf[mask]);
  return out;
}

ExteriorVector to_lex(const Exterior& e, int n, int degree) {
  ExteriorVector v;
  for (const auto& s : subsets(n, degree)) {
    auto it = e.find(mask_of(s));
    v.push_back(it == e.end() ? 0 : it->second);
  }
  return v;
}

// RREF basis of the span of the given rows, plus its pivot columns.
Rows rref_rows(const PrimeField& F, const Rows& rows, int ncols, std::vector<int>* pivots = nullptr) {
  DenseMatrix<PrimeField> m(F, static_cast<int>(rows.size()), ncols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < ncols; ++j)
      m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const auto piv = rref(F, m);
  Rows out;
  for (std::size_t i = 0; i < piv.size(); ++i) {
    std::vector<Elem> row(static_cast<std::size_t>(ncols));
    for (int j = 0; j < ncols; ++j)
      row[static_cast<std::size_t>(j)] = m.at(static_cast<int>(i), j);
    out.push_back(std::move(row));
  }
  if (pivots)
    *pivots = piv;
  return out;
}

Rows kernel_rows(const PrimeField& F, const Mat<PrimeField>& a) {
  const int d = static_cast<int>(a.size());
  DenseMatrix<PrimeField> m(F, d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m.at(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return rref_rows(F, null_space(F, m), d);
}

// Functionals vanishing on the span of `basis` (rows in coordinates of V).
Rows annihilator(const PrimeField& F, const Rows& basis, int n) {
  DenseMatrix<PrimeField> m(F, static_cast<int>(basis.size()), n);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < n; ++j)
      m.at(i, j) = basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return null_space(F, m);
}

Rows multiply(const PrimeField& F, const Rows& a, const Rows& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = inner == 0 ? 0 : b[0].size();
  Rows out(a.size(), std::vector<Elem>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0)
        continue;
      for (std::size_t j = 0; j < cols; ++j)
        out[i][j] = F.add(out[i][j], F.mul(a[i][k], b[k][j]));
    }
  return out;
}

Mat<PrimeField> normalize_form(const PrimeField& F, Mat<PrimeField> a) {
  const std::size_t d = a.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (a[i][j] != 0) {
        const Elem inv = F.inv(a[i][j]);
        for (auto& row : a)
          for (auto& x : row)
            x = F.mul(x, inv);
        return a;
      }
  throw std::invalid_argument("normalize_form: zero form");
}

Mat<PrimeField> residue(const Mat<SeriesRing>& g) {
  Mat<PrimeField> a(g.size(), std::vector<Elem>(g.size(), 0));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      a[i][j] = g[i][j][0];
  return a;
}

Mat<PrimeField> dense_inverse(const PrimeField& F, const Mat<PrimeField>& a) {
  const int s = static_cast<int>(a.size());
  DenseMatrix<PrimeField> m(F, s, 2 * s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j)
      m.at(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    m.at(i, s + i) = 1;
  }
  const auto piv = rref(F, m);
  if (static_cast<int>(piv.size()) < s || piv[static_cast<std::size_t>(s - 1)] != s - 1)
    throw std::logic_error("dense_inverse: singular matrix");
  Mat<PrimeField> inv(static_cast<std::size_t>(s), std::vector<Elem>(static_cast<std::size_t>(s)));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m.at(i, s + j);
  return inv;
}

// Inverse of a series matrix whose constant term is invertible:
// X_0 = A_0^{-1}, X_k = -A_0^{-1} sum_{j=1..k} A_j X_{k-j}.
Mat<SeriesRing> series_inverse(const SeriesRing& R, const Mat<SeriesRing>& a) {
  const PrimeField& F = R.field();
  const std::size_t s = a.size();
  const std::size_t T = static_cast<std::size_t>(R.precision());
  auto coef = [&](std::size_t k) {
    Mat<PrimeField> c(s, std::vector<Elem>(s, 0));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        c[i][j] = a[i][j][k];
    return c;
  };
  auto mm = [&](const Mat<PrimeField>& x, const Mat<PrimeField>& y) {
    Mat<PrimeField> z(s, std::vector<Elem>(s, 0));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t k = 0; k < s; ++k) {
        if (x[i][k] == 0)
          continue;
        for (std::size_t j = 0; j < s; ++j)
          z[i][j] = F.add(z[i][j], F.mul(x[i][k], y[k][j]));
      }
    return z;
  };
  std::vector<Mat<PrimeField>> A, X;
  for (std::size_t k = 0; k < T; ++k)
    A.push_back(coef(k));
  const auto inv0 = dense_inverse(F, A[0]);
  X.push_back(inv0);
  for (std::size_t k = 1; k < T; ++k) {
    Mat<PrimeField> acc(s, std::vector<Elem>(s, 0));
    for (std::size_t j = 1; j <= k; ++j) {
      const auto p = mm(A[j], X[k - j]);
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t c = 0; c < s; ++c)
          acc[i][c] = F.add(acc[i][c], p[i][c]);
    }
    auto xk = mm(inv0, acc);
    for (auto& row : xk)
      for (auto& v : row)
        v = F.neg(v);
    X.push_back(std::move(xk));
  }
  Mat<SeriesRing> out(s, std::vector<SeriesRing::Elem>(s, R.zero()));
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        out[i][j][k] = X[k][i][j];
  return out;
}

Mat<SeriesRing> mat_mul(const SeriesRing& R, const Mat<SeriesRing>& a, const Mat<SeriesRing>& b) {
  const std::size_t n = a.size(), inner = b.size(), m = inner == 0 ? 0 : b[0].size();
  Mat<SeriesRing> out(n, std::vector<SeriesRing::Elem>(m, R.zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (R.is_zero(a[i][k]))
        continue;
      for (std::size_t j = 0; j < m; ++j)
        out[i][j] = R.add(out[i][j], R.mul(a[i][k], b[k][j]));
    }
  return out;
}

Mat<SeriesRing> block(const Mat<SeriesRing>& g, std::size_t r0, std::size_t r1, std::size_t c0,
                      std::size_t c1) {
  Mat<SeriesRing> out;
  for (std::size_t i = r0; i < r1; ++i)
    out.emplace_back(g[i].begin() + static_cast<std::ptrdiff_t>(c0),
                     g[i].begin() + static_cast<std::ptrdiff_t>(c1));
  return out;
}

Elem random_nonzero(const PrimeField& F, std::mt19937_64& rng) {
  return static_cast<Elem>(1 + rng() % (F.characteristic() - 1));
}

Elem random_elem(const PrimeField& F, std::mt19937_64& rng) {
  return static_cast<Elem>(rng() % F.characteristic());
}

std::mt19937_64 seeded(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

} // namespace

// ---------------------------------------------------------------------------
// SeriesRing

SeriesRing::SeriesRing(PrimeField field, int precision) : field_(field), T_(precision) {
  if (precision < 1)
    throw std::invalid_argument("series precision must be positive");
}

SeriesRing::Elem SeriesRing::constant(PrimeField::Elem c) const { return monomial(c, 0); }

SeriesRing::Elem SeriesRing::monomial(PrimeField::Elem c, int power) const {
  Elem e = zero();
  if (power >= 0 && power < T_)
    e[static_cast<std::size_t>(power)] = c;
  return e;
}

SeriesRing::Elem SeriesRing::add(const Elem& a, const Elem& b) const {
  Elem c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    c[i] = field_.add(a[i], b[i]);
  return c;
}

SeriesRing::Elem SeriesRing::sub(const Elem& a, const Elem& b) const {
  Elem c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    c[i] = field_.sub(a[i], b[i]);
  return c;
}

SeriesRing::Elem SeriesRing::neg(const Elem& a) const {
  Elem c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    c[i] = field_.neg(a[i]);
  return c;
}

SeriesRing::Elem SeriesRing::mul(const Elem& a, const Elem& b) const {
  Elem c = zero();
  for (int i = 0; i < T_; ++i) {
    if (a[static_cast<std::size_t>(i)] == 0)
      continue;
    for (int j = 0; i + j < T_; ++j)
      c[static_cast<std::size_t>(i + j)] =
          field_.add(c[static_cast<std::size_t>(i + j)],
                     field_.mul(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]));
  }
  return c;
}

SeriesRing::Elem SeriesRing::scale(const Elem& a, PrimeField::Elem c) const {
  Elem r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = field_.mul(a[i], c);
  return r;
}

bool SeriesRing::is_zero(const Elem& a) const {
  return std::all_of(a.begin(), a.end(), [](PrimeField::Elem x) { return x == 0; });
}

int SeriesRing::valuation(const Elem& a) const {
  for (int i = 0; i < T_; ++i)
    if (a[static_cast<std::size_t>(i)] != 0)
      return i;
  return T_;
}

SeriesRing::Elem SeriesRing::shift_down(const Elem& a, int v) const {
  Elem r = zero();
  for (int i = v; i < T_; ++i)
    r[static_cast<std::size_t>(i - v)] = a[static_cast<std::size_t>(i)];
  return r;
}

SeriesRing::Elem SeriesRing::truncate(const Elem& a, int keep) const {
  Elem r = a;
  for (int i = std::max(keep, 0); i < T_; ++i)
    r[static_cast<std::size_t>(i)] = 0;
  return r;
}

// ---------------------------------------------------------------------------
// SkewFamily

SkewFamily SkewFamily::zero(const PrimeField& field, int dim, int precision) {
  if (dim < 1 || dim > kMaxSkewDim)
    throw std::invalid_argument("skew family dimension out of range");
  SkewFamily f;
  f.field = field;
  f.dim = dim;
  f.precision = precision > 0 ? precision : 2 * dim;
  const SeriesRing R = f.ring();
  f.entries.assign(static_cast<std::size_t>(dim),
                   std::vector<SeriesRing::Elem>(static_cast<std::size_t>(dim), R.zero()));
  return f;
}

void SkewFamily::add_term(int i, int j, std::int64_t c, int power) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j)
    throw std::invalid_argument("add_term: bad index pair");
  if (power < 0 || power >= precision)
    throw std::invalid_argument("add_term: power outside the carried precision");
  const Elem v = field.from_int(c);
  auto& a = entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  auto& b = entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  a[static_cast<std::size_t>(power)] = field.add(a[static_cast<std::size_t>(power)], v);
  b[static_cast<std::size_t>(power)] = field.sub(b[static_cast<std::size_t>(power)], v);
}

void SkewFamily::validate() const {
  if (dim < 1 || static_cast<int>(entries.size()) != dim)
    throw std::invalid_argument("skew family: entry matrix does not match the dimension");
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != dim)
      throw std::invalid_argument("skew family: entry matrix is not square");
    for (const auto& e : row)
      if (static_cast<int>(e.size()) != precision)
        throw std::invalid_argument("skew family: series length differs from the precision");
  }
  const SeriesRing R = ring();
  if (!is_skew(R, entries))
    throw std::invalid_argument("skew family: matrix is not skew-symmetric");
  bool special = false;
  for (const auto& row : entries)
    for (const auto& e : row)
      special = special || e[0] != 0;
  if (!special)
    throw std::invalid_argument("skew family: special fibre is zero");
}

int SkewFamily::generic_rank() const {
  const SeriesRing R = ring();
  const auto pf = all_pfaffians(R, entries);
  int best = 0;
  for (std::uint32_t mask = 0; mask < pf.size(); ++mask)
    if (!R.is_zero(pf[mask]))
      best = std::max(best, std::popcount(mask));
  return best;
}

nlohmann::json SkewFamily::to_json() const {
  nlohmann::json j;
  j["dimension"] = dim;
  j["field"] = field.characteristic();
  j["precision"] = precision;
  auto arr = nlohmann::json::array();
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) {
      const auto& e = entries[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      int last = precision - 1;
      while (last >= 0 && e[static_cast<std::size_t>(last)] == 0)
        --last;
      if (last < 0)
        continue;
      auto coefs = nlohmann::json::array();
      for (int k = 0; k <= last; ++k)
        coefs.push_back(field.to_signed(e[static_cast<std::size_t>(k)]));
      arr.push_back({{"i", a}, {"j", b}, {"t", coefs}});
    }
  j["entries"] = arr;
  return j;
}

SkewFamily SkewFamily::from_json(const nlohmann::json& j) {
  const int dim = j.at("dimension").get<int>();
  const auto p = j.value("field", static_cast<std::uint32_t>(PrimeField::kDefaultPrime));
  if (!is_prime(p))
    throw std::invalid_argument("skew family: field size must be prime");
  int precision = j.value("precision", 2 * dim);
  for (const auto& e : j.at("entries"))
    precision = std::max(precision, static_cast<int>(e.at("t").size()));
  SkewFamily f = zero(PrimeField(p), dim, precision);
  for (const auto& e : j.at("entries")) {
    const int a = e.at("i").get<int>(), b = e.at("j").get<int>();
    const auto& coefs = e.at("t");
    for (std::size_t k = 0; k < coefs.size(); ++k)
      f.add_term(a, b, coefs[k].get<std::int64_t>(), static_cast<int>(k));
  }
  f.validate();
  return f;
}

// ---------------------------------------------------------------------------
// Wedge powers

ExteriorVector normalize_projective(const PrimeField& field, ExteriorVector v) {
  auto it = std::find_if(v.begin(), v.end(), [](Elem x) { return x != 0; });
  if (it == v.end())
    throw std::invalid_argument("normalize_projective: zero vector");
  const Elem inv = field.inv(*it);
  for (auto& x : v)
    x = field.mul(x, inv);
  return v;
}

ExteriorVector divided_power(const PrimeField& field, const Mat<PrimeField>& form, int r) {
  const int n = static_cast<int>(form.size());
  return to_lex(divided_power_map(field, form, r), n, 2 * r);
}

WedgeLimit wedge_power_limit(const SkewFamily& fam, int r) {
  fam.validate();
  const int l = fam.l();
  if (r < 1 || r > l)
    throw std::invalid_argument("wedge_power_limit: r must lie in 1..l = " + std::to_string(l));
  const SeriesRing R = fam.ring();
  const auto pf = all_pfaffians(R, fam.entries);
  const auto subs = subsets(fam.dim, 2 * r);
  int v = fam.precision;
  for (const auto& s : subs)
    v = std::min(v, R.valuation(pf[mask_of(s)]));
  if (v >= fam.precision)
    throw ImprecisionError("wedge_power_limit: every coefficient vanishes to precision t^" +
                           std::to_string(fam.precision) + "; raise the precision");
  WedgeLimit w;
  w.r = r;
  w.valuation = v;
  for (const auto& s : subs)
    w.limit.push_back(pf[mask_of(s)][static_cast<std::size_t>(v)]);
  w.limit = normalize_projective(fam.field, std::move(w.limit));
  return w;
}

// ---------------------------------------------------------------------------
// Normal data

std::vector<int> SkewNormalData::ranks() const {
  std::vector<int> r;
  for (const auto& lv : levels)
    r.push_back(lv.rank);
  return r;
}

std::vector<Rows> SkewNormalData::flag() const {
  std::vector<Rows> f;
  for (std::size_t i = 1; i < levels.size(); ++i)
    f.push_back(levels[i].basis);
  return f;
}

nlohmann::json SkewNormalData::to_json() const {
  auto mat = [&](const Rows& m) {
    auto arr = nlohmann::json::array();
    for (const auto& row : m) {
      auto r = nlohmann::json::array();
      for (Elem x : row)
        r.push_back(field.to_signed(x));
      arr.push_back(r);
    }
    return arr;
  };
  nlohmann::json j;
  j["dimension"] = dim;
  j["field"] = field.characteristic();
  j["l"] = l;
  j["ranks"] = ranks();
  auto lv = nlohmann::json::array();
  for (const auto& level : levels)
    lv.push_back({{"basis", mat(level.basis)},
                  {"form", mat(level.form)},
                  {"rank", level.rank},
                  {"valuation", level.valuation}});
  j["levels"] = lv;
  return j;
}

SkewNormalData extract_normal_data(const SkewFamily& fam) {
  fam.validate();
  const PrimeField& F = fam.field;
  const int N = fam.dim;
  SkewNormalData data;
  data.field = F;
  data.dim = N;
  data.l = fam.l();

  Rows basis(static_cast<std::size_t>(N), std::vector<Elem>(static_cast<std::size_t>(N), 0));
  for (int i = 0; i < N; ++i)
    basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  Mat<SeriesRing> G = fam.entries;
  int prec = fam.precision;
  int removed = 0;
  int total = 0;
  while (true) {
    const SeriesRing R(F, fam.precision);
    const auto a0 = residue(G);
    const int rank = matrix_rank(F, a0);
    if (rank == 0)
      throw std::logic_error("extract_normal_data: zero residue");
    data.levels.push_back({basis, normalize_form(F, a0), rank, removed});
    total += rank / 2;
    if (total > data.l)
      throw std::invalid_argument("extract_normal_data: ranks exceed the generic rank");
    if (total == data.l)
      break;

    // Coordinates: the standard complement U of the kernel K first, then K.
    const Rows K = kernel_rows(F, a0);
    std::vector<int> kpiv;
    rref_rows(F, K, static_cast<int>(a0.size()), &kpiv);
    const int d = static_cast<int>(a0.size());
    std::vector<std::vector<Elem>> cols;
    for (int u = 0; u < d; ++u)
      if (std::find(kpiv.begin(), kpiv.end(), u) == kpiv.end()) {
        std::vector<Elem> e(static_cast<std::size_t>(d), 0);
        e[static_cast<std::size_t>(u)] = 1;
        cols.push_back(std::move(e));
      }
    const std::size_t s = cols.size();
    for (const auto& k : K)
      cols.push_back(k);
    // P^T G P with P the constant change of basis whose columns are `cols`.
    Mat<SeriesRing> P(static_cast<std::size_t>(d),
                      std::vector<SeriesRing::Elem>(static_cast<std::size_t>(d), R.zero()));
    Mat<SeriesRing> Pt = P;
    for (int c = 0; c < d; ++c)
      for (int x = 0; x < d; ++x) {
        const Elem v = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)];
        P[static_cast<std::size_t>(x)][static_cast<std::size_t>(c)] = R.constant(v);
        Pt[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)] = R.constant(v);
      }
    const auto Gp = mat_mul(R, mat_mul(R, Pt, G), P);
    const auto A = block(Gp, 0, s, 0, s);
    const auto B = block(Gp, 0, s, s, Gp.size());
    const auto Bt = block(Gp, s, Gp.size(), 0, s);
    const auto C = block(Gp, s, Gp.size(), s, Gp.size());
    const auto corr = mat_mul(R, mat_mul(R, Bt, series_inverse(R, A)), B);
    Mat<SeriesRing> gamma = C;
    int v = prec;
    for (std::size_t i = 0; i < C.size(); ++i)
      for (std::size_t j = 0; j < C.size(); ++j) {
        gamma[i][j] = R.truncate(R.sub(C[i][j], corr[i][j]), prec);
        v = std::min(v, R.valuation(gamma[i][j]));
      }
    if (v >= prec)
      throw ImprecisionError("extract_normal_data: residual form vanishes to the carried "
                             "precision; raise the precision");
    for (auto& row : gamma)
      for (auto& e : row)
        e = R.truncate(R.shift_down(e, v), prec - v);
    prec -= v;
    removed = v;
    G = std::move(gamma);

    Rows next = multiply(F, K, basis);
    if (rref_rows(F, next, N) != next)
      throw std::logic_error("extract_normal_data: composed basis is not reduced");
    basis = std::move(next);
  }
  return data;
}

// ---------------------------------------------------------------------------
// Lifts, omega and smoothing

Mat<PrimeField> canonical_lift(const SkewNormalData& data, int level) {
  if (level < 0 || level >= static_cast<int>(data.levels.size()))
    throw std::out_of_range("canonical_lift: level out of range");
  const auto& lv = data.levels[static_cast<std::size_t>(level)];
  std::vector<int> piv;
  for (const auto& row : lv.basis)
    piv.push_back(static_cast<int>(std::find_if(row.begin(), row.end(),
                                                [](Elem x) { return x != 0; }) -
                                   row.begin()));
  const auto N = static_cast<std::size_t>(data.dim);
  Mat<PrimeField> out(N, std::vector<Elem>(N, 0));
  for (std::size_t a = 0; a < piv.size(); ++a)
    for (std::size_t b = 0; b < piv.size(); ++b)
      out[static_cast<std::size_t>(piv[a])][static_cast<std::size_t>(piv[b])] = lv.form[a][b];
  return out;
}

Mat<PrimeField> random_lift(const SkewNormalData& data, int level, std::uint64_t seed) {
  auto out = canonical_lift(data, level);
  const PrimeField& F = data.field;
  const auto R = annihilator(F, data.levels[static_cast<std::size_t>(level)].basis, data.dim);
  auto rng = seeded(seed);
  // delta = R^T X - X^T R lies in W^perp ^ V*.
  for (const auto& phi : R) {
    std::vector<Elem> psi(static_cast<std::size_t>(data.dim));
    for (auto& x : psi)
      x = random_elem(F, rng);
    for (std::size_t a = 0; a < psi.size(); ++a)
      for (std::size_t b = 0; b < psi.size(); ++b) {
        const Elem t = F.sub(F.mul(phi[a], psi[b]), F.mul(psi[a], phi[b]));
        out[a][b] = F.add(out[a][b], t);
      }
  }
  return out;
}

ExteriorVector build_omega(const SkewNormalData& data, int r, std::uint64_t seed) {
  if (r < 1 || r > data.l)
    throw std::invalid_argument("build_omega: r must lie in 1..l = " + std::to_string(data.l));
  const PrimeField& F = data.field;
  Exterior acc{{0u, 1}};
  int left = r;
  for (std::size_t i = 0; i < data.levels.size() && left > 0; ++i) {
    const int c = std::min(left, data.levels[i].rank / 2);
    const auto lift = seed == 0 ? canonical_lift(data, static_cast<int>(i))
                                : random_lift(data, static_cast<int>(i), seed * 1000003u + i);
    acc = wedge(F, acc, divided_power_map(F, lift, c));
    left -= c;
  }
  auto v = to_lex(acc, data.dim, 2 * r);
  if (std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; }))
    throw std::logic_error("build_omega: omega vanishes");
  return normalize_projective(F, std::move(v));
}

Mat<PrimeField> adapted_lift(const SkewNormalData& data, int level) {
  if (level < 0 || level >= static_cast<int>(data.levels.size()))
    throw std::out_of_range("adapted_lift: level out of range");
  const PrimeField& F = data.field;
  const auto N = static_cast<std::size_t>(data.dim);
  // Rows of B: the complements C_0, ..., C_{level-1}, then the basis of W_level.
  Rows B;
  for (int j = 0; j < level; ++j) {
    const auto& cur = data.levels[static_cast<std::size_t>(j)].basis;
    const auto& next = data.levels[static_cast<std::size_t>(j) + 1].basis;
    std::vector<int> piv;
    rref_rows(F, cur, data.dim, &piv);
    // Coordinates of the next basis in the current one; its pivots mark W_{j+1}.
    Rows K;
    for (const auto& row : next) {
      std::vector<Elem> k;
      for (int c : piv)
        k.push_back(row[static_cast<std::size_t>(c)]);
      K.push_back(std::move(k));
    }
    std::vector<int> kpiv;
    rref_rows(F, K, static_cast<int>(cur.size()), &kpiv);
    for (int u = 0; u < static_cast<int>(cur.size()); ++u)
      if (std::find(kpiv.begin(), kpiv.end(), u) == kpiv.end())
        B.push_back(cur[static_cast<std::size_t>(u)]);
  }
  const auto& lv = data.levels[static_cast<std::size_t>(level)];
  const std::size_t head = B.size();
  for (const auto& row : lv.basis)
    B.push_back(row);
  if (B.size() != N)
    throw std::invalid_argument("adapted_lift: flag and complements do not span V");
  // Coefficients on W_level of a vector x are the tail of B^{-T} x.
  const auto inv = dense_inverse(F, B);
  const std::size_t w = lv.basis.size();
  Rows P(w, std::vector<Elem>(N));
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t x = 0; x < N; ++x)
      P[a][x] = inv[x][head + a];
  Mat<PrimeField> out(N, std::vector<Elem>(N, 0));
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = 0; b < w; ++b) {
      if (lv.form[a][b] == 0)
        continue;
      for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y)
          out[x][y] = F.add(out[x][y], F.mul(F.mul(P[a][x], lv.form[a][b]), P[b][y]));
    }
  return out;
}

SkewFamily smoothing(const SkewNormalData& data, std::uint64_t seed, int precision) {
  const int m = static_cast<int>(data.levels.size());
  if (m == 0)
    throw std::invalid_argument("smoothing: empty data");
  SkewFamily fam = SkewFamily::zero(data.field, data.dim, precision);
  if (fam.precision <= m)
    throw std::invalid_argument("smoothing: precision must exceed the number of levels");
  const PrimeField& F = data.field;
  auto rng = seeded(seed);
  // Forms in ^2 of the annihilator of W_1 only touch the nondegenerate block
  // of the first step, so they perturb the family without changing its data.
  Rows perp;
  if (m > 1)
    perp = annihilator(F, data.levels[1].basis, data.dim);
  const SeriesRing R = fam.ring();
  for (int i = 0; i < m; ++i) {
    Mat<PrimeField> term = adapted_lift(data, i);
    const Elem lambda = i == 0 ? 1 : random_nonzero(F, rng);
    for (auto& row : term)
      for (auto& x : row)
        x = F.mul(x, lambda);
    if (i > 0) {
      const std::size_t q = perp.size();
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = a + 1; b < q; ++b) {
          const Elem c = random_elem(F, rng);
          if (c == 0)
            continue;
          for (int x = 0; x < data.dim; ++x)
            for (int y = 0; y < data.dim; ++y) {
              const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
              const Elem v = F.sub(F.mul(perp[a][ux], perp[b][uy]), F.mul(perp[b][ux], perp[a][uy]));
              term[ux][uy] = F.add(term[ux][uy], F.mul(c, v));
            }
        }
    }
    for (int x = 0; x < data.dim; ++x)
      for (int y = 0; y < data.dim; ++y) {
        auto& e = fam.entries[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        e = R.add(e, R.monomial(term[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)], i));
      }
  }
  fam.validate();
  return fam;
}

std::vector<SkewNormalData> enumerate_normal_data(const PrimeField& F, int dim) {
  const std::uint64_t q = F.characteristic();
  std::uint64_t count = 1;
  for (int i = 0; i < dim * (dim - 1) / 2; ++i) {
    count *= q;
    if (count > (std::uint64_t{1} << 24))
      throw std::invalid_argument("enumerate_normal_data: search space too large");
  }
  SkewNormalData proto;
  proto.field = F;
  proto.dim = dim;
  proto.l = dim / 2;
  std::vector<SkewNormalData> out;
  if (proto.l == 0)
    return out;

  auto rec = [&](auto&& self, const Rows& basis, std::vector<SkewLevel>& levels, int total) -> void {
    const int d = static_cast<int>(basis.size());
    const int slots = d * (d - 1) / 2;
    std::vector<Elem> upper(static_cast<std::size_t>(slots), 0);
    std::uint64_t combos = 1;
    for (int i = 0; i < slots; ++i)
      combos *= q;
    for (std::uint64_t code = 1; code < combos; ++code) {
      std::uint64_t c = code;
      for (auto& x : upper) {
        x = static_cast<Elem>(c % q);
        c /= q;
      }
      // One representative per scalar class: first nonzero entry equal to 1.
      const auto first = std::find_if(upper.begin(), upper.end(), [](Elem x) { return x != 0; });
      if (*first != 1)
        continue;
      Mat<PrimeField> form(static_cast<std::size_t>(d), std::vector<Elem>(static_cast<std::size_t>(d), 0));
      std::size_t idx = 0;
      for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b, ++idx) {
          form[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = upper[idx];
          form[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = F.neg(upper[idx]);
        }
      const int rank = matrix_rank(F, form);
      levels.push_back({basis, form, rank, 0});
      const int t2 = total + rank / 2;
      if (t2 == proto.l) {
        SkewNormalData dd = proto;
        dd.levels = levels;
        out.push_back(std::move(dd));
      } else {
        self(self, multiply(F, kernel_rows(F, form), basis), levels, t2);
      }
      levels.pop_back();
    }
  };
  Rows id(static_cast<std::size_t>(dim), std::vector<Elem>(static_cast<std::size_t>(dim), 0));
  for (int i = 0; i < dim; ++i)
    id[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  std::vector<SkewLevel> levels;
  rec(rec, id, levels, 0);
  return out;
}

} // namespace embvan
