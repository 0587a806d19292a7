#include "embvan/catalog.hpp"

#include <random>
#include <stdexcept>

#include "embvan/cohomology.hpp"

namespace embvan {

namespace {

int parse_int(const std::string& s, const std::string& label) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw std::invalid_argument("malformed label '" + label + "'");
  return v;
}

std::pair<std::string, std::string> split_label(const std::string& label) {
  const auto colon = label.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("label '" + label + "' has no ':'");
  return {label.substr(0, colon), label.substr(colon + 1)};
}

std::pair<int, int> parse_dims(const std::string& s, const std::string& label) {
  const auto x = s.find('x');
  if (x == std::string::npos)
    throw std::invalid_argument("label '" + label + "' needs KxM");
  return {parse_int(s.substr(0, x), label), parse_int(s.substr(x + 1), label)};
}

PrimeField::Elem random_elem(std::mt19937_64& rng, const PrimeField& f) {
  return static_cast<PrimeField::Elem>(rng() % f.characteristic());
}

std::mt19937_64 seeded(std::uint64_t seed, int attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(attempt)};
  return std::mt19937_64(seq);
}

PolyGF random_linear_form(const RingGF& ring, std::mt19937_64& rng) {
  std::vector<Term<PrimeField>> terms;
  for (int i = 0; i < ring.nvars(); ++i)
    terms.push_back({Monomial::variable(i), random_elem(rng, ring.field())});
  return ring.normalize(std::move(terms));
}

PolyGF derivative(const RingGF& ring, const PolyGF& f, int var) {
  std::vector<Term<PrimeField>> terms;
  for (const auto& t : f.terms) {
    const int e = t.mono[var];
    if (e == 0)
      continue;
    Monomial m = t.mono;
    m.exp[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e - 1);
    m.deg = static_cast<std::uint16_t>(m.deg - 1);
    terms.push_back({m, ring.field().mul(t.coef, ring.field().from_int(e))});
  }
  return ring.normalize(std::move(terms));
}

// Hilbert polynomial of S/I at t, from a free resolution.
long long quotient_hilbert_polynomial(const GradedIdeal<PrimeField>& I, int t) {
  ModuleCohomology<PrimeField> mc(I.ring(), free_resolution(I.ring(), presentation_of(I)));
  return mc.hilbert_polynomial(t).get_si();
}

} // namespace

EmbeddingCase EmbeddingCase::generic(int k, int m) {
  EmbeddingCase c{CaseKind::Generic, k, m};
  c.validate();
  return c;
}

EmbeddingCase EmbeddingCase::symmetric(int k) {
  EmbeddingCase c{CaseKind::Symmetric, k, k};
  c.validate();
  return c;
}

EmbeddingCase EmbeddingCase::skew(int k) {
  EmbeddingCase c{CaseKind::Skew, k, k};
  c.validate();
  return c;
}

EmbeddingCase EmbeddingCase::parse(const std::string& spec) {
  const auto [kind, rest] = split_label(spec);
  if (kind == "generic" || kind == "segre") {
    const auto [k, m] = parse_dims(rest, spec);
    return generic(k, m);
  }
  if (kind == "symmetric" || kind == "veronese")
    return symmetric(parse_int(rest, spec));
  if (kind == "skew" || kind == "pluecker")
    return skew(parse_int(rest, spec));
  throw std::invalid_argument("unknown case '" + spec + "'");
}

void EmbeddingCase::validate() const {
  switch (kind) {
  case CaseKind::Generic:
    if (k < 2 || m < k)
      throw std::invalid_argument("generic case needs 2 <= k <= m");
    break;
  case CaseKind::Symmetric:
    if (k < 2 || m != k)
      throw std::invalid_argument("symmetric case needs k >= 2");
    break;
  case CaseKind::Skew:
    // Below k = 4 there are no 4x4 Pfaffians and the rank-two locus is all of P^n.
    if (k < 4 || m != k)
      throw std::invalid_argument("skew case needs k >= 4");
    break;
  }
}

int EmbeddingCase::nvars() const {
  switch (kind) {
  case CaseKind::Generic:
    return k * m;
  case CaseKind::Symmetric:
    return k * (k + 1) / 2;
  case CaseKind::Skew:
    return k * (k - 1) / 2;
  }
  return 0;
}

int EmbeddingCase::r() const { return codim_delta(*this, 2); }

int EmbeddingCase::max_index() const { return kind == CaseKind::Skew ? k / 2 : k; }

std::string EmbeddingCase::name() const {
  switch (kind) {
  case CaseKind::Generic:
    return "generic:" + std::to_string(k) + "x" + std::to_string(m);
  case CaseKind::Symmetric:
    return "symmetric:" + std::to_string(k);
  case CaseKind::Skew:
    return "skew:" + std::to_string(k);
  }
  return "?";
}

std::string EmbeddingCase::label() const {
  switch (kind) {
  case CaseKind::Generic:
    return "segre:" + std::to_string(k) + "x" + std::to_string(m);
  case CaseKind::Symmetric:
    return "veronese:" + std::to_string(k);
  case CaseKind::Skew:
    return "pluecker:" + std::to_string(k);
  }
  return "?";
}

int codim_delta(const EmbeddingCase& c, int i) {
  if (i < 1 || i > c.max_index())
    throw std::out_of_range("degeneracy index " + std::to_string(i) + " out of range for " +
                            c.name());
  switch (c.kind) {
  case CaseKind::Generic:
    return (c.k - i + 1) * (c.m - i + 1);
  case CaseKind::Symmetric:
    return static_cast<int>(binomial(c.k - i + 2, 2));
  case CaseKind::Skew:
    return static_cast<int>(binomial(c.k - 2 * i + 2, 2));
  }
  return 0;
}

int coordinate_index(const EmbeddingCase& c, int i, int j) {
  switch (c.kind) {
  case CaseKind::Generic:
    return i * c.m + j;
  case CaseKind::Symmetric: {
    if (i > j)
      std::swap(i, j);
    // Rows 0..i-1 of the upper triangle hold sum (k - r) entries.
    return i * c.k - i * (i - 1) / 2 + (j - i);
  }
  case CaseKind::Skew: {
    if (i == j)
      throw std::invalid_argument("skew diagonal carries no coordinate");
    if (i > j)
      std::swap(i, j);
    return i * (c.k - 1) - i * (i - 1) / 2 + (j - i - 1);
  }
  }
  return -1;
}

Mat<RingGF> universal_matrix(const EmbeddingCase& c, const RingGF& ring) {
  Mat<RingGF> m(static_cast<std::size_t>(c.k), std::vector<PolyGF>(static_cast<std::size_t>(c.m)));
  for (int i = 0; i < c.k; ++i)
    for (int j = 0; j < c.m; ++j) {
      auto& e = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (c.kind == CaseKind::Skew && i == j)
        continue;
      e = ring.variable(coordinate_index(c, i, j));
      if (c.kind == CaseKind::Skew && i > j)
        e = ring.neg(e);
    }
  return m;
}

Mat<PrimeField> matrix_at(const EmbeddingCase& c, const PrimeField& field,
                          std::span<const PrimeField::Elem> coords) {
  if (coords.size() != static_cast<std::size_t>(c.nvars()))
    throw std::invalid_argument("matrix_at: wrong number of coordinates");
  Mat<PrimeField> m(static_cast<std::size_t>(c.k),
                    std::vector<PrimeField::Elem>(static_cast<std::size_t>(c.m), 0));
  for (int i = 0; i < c.k; ++i)
    for (int j = 0; j < c.m; ++j) {
      if (c.kind == CaseKind::Skew && i == j)
        continue;
      auto v = coords[static_cast<std::size_t>(coordinate_index(c, i, j))];
      if (c.kind == CaseKind::Skew && i > j)
        v = field.neg(v);
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
    }
  return m;
}

GradedIdeal<PrimeField> build_degeneracy_locus(const EmbeddingCase& c, int i,
                                               const PrimeField& field) {
  const bool skew = c.kind == CaseKind::Skew;
  if (i < 2 || i > c.max_index())
    throw std::out_of_range("degeneracy index " + std::to_string(i) + " out of range for " +
                            c.name());
  RingGF ring(field, c.nvars());
  const auto M = universal_matrix(c, ring);
  return GradedIdeal<PrimeField>(ring, skew ? sub_pfaffians(ring, M, i) : minors(ring, M, i));
}

VarietySpec build_determinantal(const EmbeddingCase& c, const PrimeField& field) {
  c.validate();
  VarietySpec v;
  v.label = c.label();
  v.n = c.n();
  v.ideal = build_degeneracy_locus(c, 2, field);
  v.codim = c.r();
  v.d_Y = c.d_Y();
  v.embedding = c;
  return v;
}

VarietySpec build_rational_normal_curve(int m, const PrimeField& field) {
  if (m < 2)
    throw std::invalid_argument("rational normal curve needs degree m >= 2");
  RingGF ring(field, m + 1);
  Mat<RingGF> cat(2, std::vector<PolyGF>(static_cast<std::size_t>(m)));
  for (int j = 0; j < m; ++j) {
    cat[0][static_cast<std::size_t>(j)] = ring.variable(j);
    cat[1][static_cast<std::size_t>(j)] = ring.variable(j + 1);
  }
  VarietySpec v;
  v.label = "rnc:" + std::to_string(m);
  v.n = m;
  v.ideal = GradedIdeal<PrimeField>(ring, minors(ring, cat, 2));
  v.codim = m - 1;
  v.d_Y = 2;
  v.curve_degree = m;
  v.genus = 0;
  return v;
}

bool curve_is_smooth(const GradedIdeal<PrimeField>& I, int codim) {
  const auto& ring = I.ring();
  Mat<RingGF> jac;
  for (const auto& g : I.generators()) {
    std::vector<PolyGF> row;
    for (int v = 0; v < ring.nvars(); ++v)
      row.push_back(derivative(ring, g, v));
    jac.push_back(std::move(row));
  }
  auto gens = I.generators();
  for (auto& mnr : minors(ring, jac, codim))
    gens.push_back(std::move(mnr));
  return measured_codimension(GradedIdeal<PrimeField>(ring, gens)) == ring.nvars();
}

VarietySpec build_elliptic_curve(int degree, std::uint64_t seed, const PrimeField& field,
                                 int max_attempts) {
  if (degree != 4 && degree != 5)
    throw std::invalid_argument("elliptic curves are available in degree 4 and 5");
  const int N = degree;  // P^{d-1}
  RingGF ring(field, N);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    auto rng = seeded(seed, attempt);
    std::vector<PolyGF> gens;
    if (degree == 4) {
      for (int q = 0; q < 2; ++q) {
        std::vector<Term<PrimeField>> terms;
        for (const auto& m : monomials_of_degree(N, 2))
          terms.push_back({m, random_elem(rng, field)});
        gens.push_back(ring.normalize(std::move(terms)));
      }
    } else {
      Mat<RingGF> skew(5, std::vector<PolyGF>(5));
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
          skew[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              random_linear_form(ring, rng);
          skew[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
              ring.neg(skew[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
      gens = sub_pfaffians(ring, skew, 2);
    }
    GradedIdeal<PrimeField> I(ring, gens);
    const int codim = N - 2;
    if (measured_codimension(I) != codim)
      continue;
    // Genus one and degree d: Hilbert polynomial d t.
    if (quotient_hilbert_polynomial(I, 0) != 0 || quotient_hilbert_polynomial(I, 1) != degree)
      continue;
    if (!curve_is_smooth(I, codim))
      continue;
    VarietySpec v;
    v.label = "elliptic:" + std::to_string(degree);
    v.n = N - 1;
    v.ideal = std::move(I);
    v.codim = codim;
    v.d_Y = 2;
    v.curve_degree = degree;
    v.genus = 1;
    v.seed = seed;
    v.attempts = attempt + 1;
    return v;
  }
  throw std::runtime_error("could not certify a smooth elliptic curve after " +
                           std::to_string(max_attempts) + " attempts");
}

VarietySpec build_curve(int genus, int target, std::uint64_t seed, const PrimeField& field) {
  if (genus == 0)
    return build_rational_normal_curve(target, field);
  if (genus == 1)
    return build_elliptic_curve(target, seed, field);
  throw std::invalid_argument("only genus 0 and 1 curves are constructed");
}

VarietySpec from_label(const std::string& label, std::uint64_t seed, const PrimeField& field) {
  const auto [kind, rest] = split_label(label);
  if (kind == "segre") {
    const auto [k, m] = parse_dims(rest, label);
    return build_determinantal(EmbeddingCase::generic(k, m), field);
  }
  if (kind == "veronese")
    return build_determinantal(EmbeddingCase::symmetric(parse_int(rest, label)), field);
  if (kind == "pluecker")
    return build_determinantal(EmbeddingCase::skew(parse_int(rest, label)), field);
  if (kind == "rnc")
    return build_rational_normal_curve(parse_int(rest, label), field);
  if (kind == "elliptic")
    return build_elliptic_curve(parse_int(rest, label), seed, field);
  throw std::invalid_argument("unknown catalog label '" + label + "'");
}

std::vector<CatalogEntry> catalog_listing() {
  std::vector<CatalogEntry> out;
  auto add_case = [&](const EmbeddingCase& c, const std::string& what) {
    out.push_back({c.label(), what, c.n(), c.r(), c.d_Y()});
  };
  add_case(EmbeddingCase::generic(2, 2), "quadric surface P1xP1 in P3");
  add_case(EmbeddingCase::generic(2, 3), "Segre P1xP2 in P5");
  add_case(EmbeddingCase::generic(2, 4), "Segre P1xP3 in P7");
  add_case(EmbeddingCase::generic(3, 3), "Segre P2xP2 in P8");
  add_case(EmbeddingCase::generic(3, 4), "Segre P2xP3 in P11");
  add_case(EmbeddingCase::symmetric(2), "conic in P2");
  add_case(EmbeddingCase::symmetric(3), "Veronese surface in P5");
  add_case(EmbeddingCase::symmetric(4), "Veronese threefold in P9");
  add_case(EmbeddingCase::skew(4), "G(2,4) in P5");
  add_case(EmbeddingCase::skew(5), "G(2,5) in P9");
  add_case(EmbeddingCase::skew(6), "G(2,6) in P14");
  for (int m = 2; m <= 5; ++m)
    out.push_back({"rnc:" + std::to_string(m), "rational normal curve of degree " + std::to_string(m),
                   m, m - 1, 2});
  out.push_back({"elliptic:4", "elliptic normal quartic in P3", 3, 2, 2});
  out.push_back({"elliptic:5", "elliptic normal quintic in P4", 4, 3, 2});
  return out;
}

int measured_codimension(const GradedIdeal<PrimeField>& I) {
  const int N = I.nvars();
  if (N > 64)
    throw std::invalid_argument("measured_codimension: too many variables");
  const auto G = groebner_basis(I.ring(), I.generators());
  std::vector<std::uint64_t> supports;
  for (const auto& g : G) {
    std::uint64_t s = 0;
    for (int v = 0; v < N; ++v)
      if (g.lead().mono[v] != 0)
        s |= std::uint64_t{1} << v;
    if (s == 0)
      return N;  // unit ideal: empty, even as an affine cone
    supports.push_back(s);
  }
  // Largest variable set U with no leading monomial supported inside U.
  int best = 0;
  auto search = [&](auto&& self, int v, std::uint64_t chosen, int size) -> void {
    if (size + (N - v) <= best)
      return;
    if (v == N) {
      best = size;
      return;
    }
    const std::uint64_t with = chosen | (std::uint64_t{1} << v);
    bool ok = true;
    for (auto s : supports)
      if ((s & ~with) == 0) {
        ok = false;
        break;
      }
    if (ok)
      self(self, v + 1, with, size + 1);
    self(self, v + 1, chosen, size);
  };
  search(search, 0, 0, 0);
  return N - best;
}

int multiplicity_at_point(const RingGF& ring, const PolyGF& f,
                          std::span<const PrimeField::Elem> x) {
  if (x.size() != static_cast<std::size_t>(ring.nvars()))
    throw std::invalid_argument("multiplicity_at_point: point has wrong dimension");
  const auto& F = ring.field();
  if (std::none_of(x.begin(), x.end(), [&](auto c) { return F.is_one(c); }))
    throw std::invalid_argument("multiplicity_at_point: point is not in a standard affine chart");
  if (f.is_zero())
    throw std::invalid_argument("multiplicity_at_point: zero polynomial");
  // Substitute x_v -> x_v + c_v one variable at a time.
  PolyGF g = f;
  for (int v = 0; v < ring.nvars(); ++v) {
    const auto c = x[static_cast<std::size_t>(v)];
    if (F.is_zero(c))
      continue;
    std::vector<Term<PrimeField>> terms;
    for (const auto& t : g.terms) {
      const int e = t.mono[v];
      Monomial rest = t.mono;
      rest.exp[static_cast<std::size_t>(v)] = 0;
      rest.deg = static_cast<std::uint16_t>(rest.deg - e);
      // (y + c)^e = sum_j C(e, j) c^(e-j) y^j
      for (int j = 0; j <= e; ++j) {
        auto coef = F.mul(t.coef, F.from_int(binomial(e, j)));
        for (int s = 0; s < e - j; ++s)
          coef = F.mul(coef, c);
        terms.push_back({rest * Monomial::variable(v, j), coef});
      }
    }
    g = ring.normalize(std::move(terms));
  }
  return ring.low_degree(g) < 0 ? 0 : ring.low_degree(g);
}

int rank_at(const EmbeddingCase& c, const PrimeField& field,
            std::span<const PrimeField::Elem> coords) {
  return matrix_rank(field, matrix_at(c, field, coords));
}

std::vector<PrimeField::Elem> sample_rank_point(const EmbeddingCase& c, int rank,
                                                std::uint64_t seed, const PrimeField& field) {
  const int maxr = std::min(c.k, c.m);
  if (rank < 1 || rank > maxr || (c.kind == CaseKind::Skew && rank % 2 != 0))
    throw std::invalid_argument("rank " + std::to_string(rank) + " not achievable in " + c.name());
  for (int attempt = 0; attempt < 50; ++attempt) {
    auto rng = seeded(seed, attempt);
    auto vec = [&](int len) {
      std::vector<PrimeField::Elem> v(static_cast<std::size_t>(len));
      for (auto& e : v)
        e = random_elem(rng, field);
      return v;
    };
    Mat<PrimeField> m(static_cast<std::size_t>(c.k),
                      std::vector<PrimeField::Elem>(static_cast<std::size_t>(c.m), 0));
    auto add_outer = [&](const auto& u, const auto& w, bool subtract) {
      for (int i = 0; i < c.k; ++i)
        for (int j = 0; j < c.m; ++j) {
          auto p = field.mul(u[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)]);
          auto& e = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          e = subtract ? field.sub(e, p) : field.add(e, p);
        }
    };
    const int factors = c.kind == CaseKind::Skew ? rank / 2 : rank;
    for (int s = 0; s < factors; ++s) {
      auto u = vec(c.k);
      switch (c.kind) {
      case CaseKind::Generic:
        add_outer(u, vec(c.m), false);
        break;
      case CaseKind::Symmetric:
        add_outer(u, u, false);
        break;
      case CaseKind::Skew: {
        auto w = vec(c.k);
        add_outer(u, w, false);
        add_outer(w, u, true);
        break;
      }
      }
    }
    if (matrix_rank(field, m) != rank)
      continue;
    std::vector<PrimeField::Elem> coords(static_cast<std::size_t>(c.nvars()), 0);
    for (int i = 0; i < c.k; ++i)
      for (int j = 0; j < c.m; ++j) {
        if ((c.kind == CaseKind::Symmetric && i > j) || (c.kind == CaseKind::Skew && i >= j))
          continue;
        coords[static_cast<std::size_t>(coordinate_index(c, i, j))] =
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    const auto first = std::find_if(coords.begin(), coords.end(), [](auto v) { return v != 0; });
    const auto inv = field.inv(*first);
    for (auto& e : coords)
      e = field.mul(e, inv);
    if (rank_at(c, field, coords) != rank)
      continue;
    return coords;
  }
  throw std::runtime_error("sample_rank_point: rank certification failed repeatedly");
}

} // namespace embvan
