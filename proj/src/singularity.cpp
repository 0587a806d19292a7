#include "embvan/singularity.hpp"

#include <algorithm>
#include <stdexcept>

#include "embvan/monomial.hpp"

namespace embvan {

namespace {

std::string coef_term(const mpq_class& c, const std::string& sym, bool first) {
  std::string out;
  mpq_class a = c;
  if (sgn(a) < 0) {
    out += first ? "-" : " - ";
    a = -a;
  } else if (!first) {
    out += " + ";
  }
  if (a != 1)
    out += a.get_str();
  return out + sym;
}

void trim(std::vector<mpq_class>& e) {
  while (!e.empty() && sgn(e.back()) == 0)
    e.pop_back();
}

// Codimension term of the discrepancy at E_j; it is the codimension of
// Delta_{j+1}, evaluated without the range check so that the skew boundary
// index is covered.
mpq_class codim_term(const EmbeddingCase& c, int j) {
  switch (c.kind) {
  case CaseKind::Generic:
    return (c.k - j) * (c.m - j);
  case CaseKind::Symmetric:
    return static_cast<long>(binomial(c.k - j + 1, 2));
  case CaseKind::Skew:
    return static_cast<long>(binomial(std::max(c.k - 2 * j, 0), 2));
  }
  return 0;
}

// Exceptional indices j carrying a discrepancy: 2..k-1, or 2..l-1 for skew.
int last_exceptional(const EmbeddingCase& c) {
  return c.kind == CaseKind::Skew ? c.k / 2 - 1 : c.k - 1;
}

// Square generic, symmetric and even skew cases allow at most one top-size divisor.
bool top_capped(const EmbeddingCase& c) {
  return (c.kind == CaseKind::Generic && c.k == c.m) || c.kind == CaseKind::Symmetric ||
         (c.kind == CaseKind::Skew && c.k % 2 == 0);
}

} // namespace

DivisorClass::DivisorClass(mpq_class h_coef, mpq_class e_coef)
    : DivisorClass(std::move(h_coef), std::vector<mpq_class>{std::move(e_coef)}) {}

DivisorClass::DivisorClass(mpq_class h_coef, std::vector<mpq_class> e_coefs)
    : h(std::move(h_coef)), e(std::move(e_coefs)) {
  trim(e);
}

mpq_class DivisorClass::e_coef(int j) const {
  if (j < 1)
    throw std::out_of_range("exceptional index must be positive");
  return static_cast<std::size_t>(j) <= e.size() ? e[static_cast<std::size_t>(j - 1)]
                                                 : mpq_class(0);
}

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
  std::vector<mpq_class> s(std::max(e.size(), o.e.size()), mpq_class(0));
  for (std::size_t j = 0; j < s.size(); ++j)
    s[j] = e_coef(static_cast<int>(j) + 1) + o.e_coef(static_cast<int>(j) + 1);
  return DivisorClass(h + o.h, std::move(s));
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const { return *this + o * -1; }

DivisorClass DivisorClass::operator*(const mpq_class& s) const {
  std::vector<mpq_class> t;
  for (const auto& c : e)
    t.push_back(c * s);
  return DivisorClass(h * s, std::move(t));
}

bool DivisorClass::operator==(const DivisorClass& o) const {
  auto a = e, b = o.e;
  trim(a);
  trim(b);
  return h == o.h && a == b;
}

std::string DivisorClass::to_string() const {
  std::string out;
  bool first = true;
  if (sgn(h) != 0) {
    out += coef_term(h, "H", true);
    first = false;
  }
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (sgn(e[j]) == 0)
      continue;
    const std::string sym = e.size() == 1 ? "E" : "E" + std::to_string(j + 1);
    out += coef_term(e[j], sym, first);
    first = false;
  }
  return first ? "0" : out;
}

nlohmann::json DivisorClass::to_json() const {
  nlohmann::json j;
  j["H"] = h.get_str();
  auto arr = nlohmann::json::array();
  for (const auto& c : e)
    arr.push_back(c.get_str());
  j["E"] = arr;
  j["text"] = to_string();
  return j;
}

DivisorClass canonical_class(int n, int r) {
  if (n < 1 || r < 1 || r > n)
    throw std::invalid_argument("canonical_class: need n >= 1 and 1 <= r <= n");
  return DivisorClass(-(n + 1), r - 1);
}

DivisorClass linear_series_class(int i) {
  if (i < 1)
    throw std::invalid_argument("linear_series_class: i must be positive");
  std::vector<mpq_class> e;
  for (int j = 1; j < i; ++j)
    e.push_back(-(i - j));
  return DivisorClass(i, std::move(e));
}

std::string to_string(Singularity s) {
  switch (s) {
  case Singularity::Klt:
    return "klt";
  case Singularity::Plt:
    return "plt";
  case Singularity::Lc:
    return "lc";
  case Singularity::NotLc:
    return "not-lc";
  }
  return "?";
}

bool is_lc(Singularity s) { return s != Singularity::NotLc; }

int MultiplicityVector::at(int i) const {
  if (i < 2 || i > top())
    return 0;
  return n[static_cast<std::size_t>(i - 2)];
}

int MultiplicityVector::count() const {
  int s = 0;
  for (int v : n)
    s += v;
  return s;
}

int MultiplicityVector::weighted(int shift) const {
  int s = 0;
  for (int i = 2; i <= top(); ++i)
    s += (i - shift) * at(i);
  return s;
}

nlohmann::json MultiplicityVector::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (int i = 2; i <= top(); ++i)
    j[std::to_string(i)] = at(i);
  return j;
}

void check_multiplicities(const EmbeddingCase& c, const MultiplicityVector& nv) {
  c.validate();
  const int top = c.max_index();
  if (nv.top() != top)
    throw std::invalid_argument("multiplicity vector for " + c.name() + " must list n_2..n_" +
                                std::to_string(top));
  for (int v : nv.n)
    if (v < 0)
      throw std::invalid_argument("multiplicities must be nonnegative");
  const bool capped = top_capped(c);
  if (capped && nv.at(top) > 1)
    throw std::invalid_argument("n_" + std::to_string(top) + " must be at most 1 for " + c.name());
}

mpq_class DiscrepancyReport::min_discrepancy() const {
  mpq_class m = 0;
  bool any = false;
  auto take = [&](const mpq_class& v) {
    if (!any || v < m)
      m = v;
    any = true;
  };
  for (const auto& [j, a] : exceptional)
    take(a);
  if (strict_transform)
    take(*strict_transform);
  return m;
}

nlohmann::json DiscrepancyReport::to_json() const {
  nlohmann::json j;
  j["case"] = embedding.name();
  j["n"] = n;
  j["r"] = r;
  j["multiplicities"] = multiplicities.to_json();
  j["scale"] = scale.get_str();
  nlohmann::json ex = nlohmann::json::object();
  for (const auto& [idx, a] : exceptional)
    ex[std::to_string(idx)] = a.get_str();
  j["exceptional_discrepancies"] = ex;
  if (boundary)
    j["boundary_discrepancy"] = {{"j", boundary->first}, {"value", boundary->second.get_str()}};
  j["strict_transform_discrepancy"] =
      strict_transform ? nlohmann::json(strict_transform->get_str()) : nlohmann::json(nullptr);
  j["verdict"] = to_string(verdict);
  j["F"] = F.to_json();
  j["e_bound"] = e_bound ? nlohmann::json(*e_bound) : nlohmann::json("invalid");
  return j;
}

DiscrepancyReport weighted_discrepancy_vector(const EmbeddingCase& c, const MultiplicityVector& nv,
                                              const mpq_class& scale) {
  check_multiplicities(c, nv);
  if (sgn(scale) <= 0 || scale > 1)
    throw std::invalid_argument("scale must lie in (0, 1]");
  DiscrepancyReport rep;
  rep.embedding = c;
  rep.multiplicities = nv;
  rep.scale = scale;
  rep.n = c.n();
  rep.r = c.r();
  const int top = nv.top();
  auto at_j = [&](int j) {
    mpq_class a = codim_term(c, j) - 1;
    for (int i = j + 1; i <= top; ++i)
      a -= (i - j) * scale * nv.at(i);
    return a;
  };
  for (int j = 2; j <= last_exceptional(c); ++j)
    rep.exceptional.emplace_back(j, at_j(j));
  if (c.kind == CaseKind::Skew)
    rep.boundary = std::make_pair(top, at_j(top));
  if (nv.count() > 0)
    rep.strict_transform = -scale;

  bool lc = true, klt = true, exc_strict = true;
  for (const auto& [j, a] : rep.exceptional) {
    lc = lc && a >= -1;
    exc_strict = exc_strict && a > -1;
  }
  klt = exc_strict;
  if (rep.strict_transform) {
    lc = lc && *rep.strict_transform >= -1;
    klt = klt && *rep.strict_transform > -1;
  }
  if (!lc)
    rep.verdict = Singularity::NotLc;
  else if (klt)
    rep.verdict = Singularity::Klt;
  else if (exc_strict)
    rep.verdict = Singularity::Plt;
  else
    rep.verdict = Singularity::Lc;

  rep.F = DivisorClass(scale * nv.weighted(0), -scale * nv.weighted(1));
  if (scale == 1 && nv.weighted(1) == rep.r)
    rep.e_bound = nv.weighted(0) - rep.n;
  return rep;
}

DiscrepancyReport discrepancy_vector(const EmbeddingCase& c, const MultiplicityVector& nv) {
  return weighted_discrepancy_vector(c, nv, 1);
}

MultiplicityVector closed_form_multiplicities(const EmbeddingCase& c) {
  c.validate();
  const int top = c.max_index();
  MultiplicityVector nv;
  nv.n.assign(static_cast<std::size_t>(top - 1), 0);
  auto set = [&](int i, int v) { nv.n[static_cast<std::size_t>(i - 2)] = v; };
  switch (c.kind) {
  case CaseKind::Generic:
    for (int i = 2; i < top; ++i)
      set(i, 2);
    set(top, c.m - c.k + 1);
    break;
  case CaseKind::Symmetric:
    for (int i = 2; i <= top; ++i)
      set(i, 1);
    break;
  case CaseKind::Skew:
    for (int i = 2; i < top; ++i)
      set(i, 4);
    set(top, c.k % 2 == 0 ? 1 : 3);
    break;
  }
  return nv;
}

OptimizerResult optimize_multiplicities(const EmbeddingCase& c) {
  c.validate();
  const int top = c.max_index();
  const int r = c.r();
  const bool capped = top_capped(c);
  const int last_exc = last_exceptional(c);

  std::vector<int> cur(static_cast<std::size_t>(top - 1), 0);
  std::optional<std::vector<int>> best;
  int best_count = 0;
  long long visited = 0;

  // Assigns n_i for i = top down to 2. The discrepancy at E_{i-1} depends
  // only on n_i, ..., n_top, so it is checked as soon as n_i is fixed.
  // Larger values are tried first, so the first vector reaching a given count
  // is the lexicographically largest one with that count.
  auto dfs = [&](auto&& self, int i, int remaining, int count) -> void {
    ++visited;
    if (i == 1) {
      if (remaining != 0)
        return;
      if (!best || count < best_count) {
        best = cur;
        best_count = count;
      }
      return;
    }
    // Every further unit of weight needs at least one vector entry per i - 1.
    const int lower = count + (remaining + i - 2) / (i - 1);
    if (best && lower >= best_count)
      return;
    int hi = std::min(remaining / (i - 1), codim_delta(c, i));
    if (i == top && capped)
      hi = std::min(hi, 1);
    // n_2 has weight one and must use up the rest exactly.
    const int lo = i == 2 ? remaining : 0;
    for (int v = hi; v >= lo; --v) {
      cur[static_cast<std::size_t>(i - 2)] = v;
      const int j = i - 1;
      if (j >= 2 && j <= last_exc) {
        mpq_class a = codim_term(c, j) - 1;
        for (int t = i; t <= top; ++t)
          a -= (t - j) * cur[static_cast<std::size_t>(t - 2)];
        if (a < -1)
          continue;
      }
      self(self, i - 1, remaining - (i - 1) * v, count + v);
    }
    cur[static_cast<std::size_t>(i - 2)] = 0;
  };
  dfs(dfs, top, r, 0);
  if (!best)
    throw std::runtime_error("optimize_multiplicities: no admissible vector for " + c.name());
  OptimizerResult out;
  out.multiplicities.n = *best;
  out.report = discrepancy_vector(c, out.multiplicities);
  out.candidates = visited;
  if (!is_lc(out.report.verdict) || !out.report.e_bound)
    throw std::logic_error("optimize_multiplicities: search returned an inadmissible vector");
  return out;
}

int degree_sum_bound(const std::vector<int>& degrees, int n, int r) {
  if (r < 1)
    throw std::invalid_argument("degree_sum_bound: r must be positive");
  if (static_cast<int>(degrees.size()) < r)
    throw std::invalid_argument("degree_sum_bound: fewer than r generator degrees");
  if (!std::is_sorted(degrees.begin(), degrees.end(), std::greater<>()))
    throw std::invalid_argument("degree_sum_bound: degrees must be sorted descending");
  int s = 0;
  for (int i = 0; i < r; ++i)
    s += degrees[static_cast<std::size_t>(i)];
  return s - n;
}

int compose_bound(const DivisorClass& F, int n, int r, Singularity verdict) {
  if (!is_lc(verdict))
    throw std::invalid_argument("compose_bound: F is not log canonical");
  if (F.e.size() > 1 || F.e_coef(1) != -r)
    throw std::invalid_argument("compose_bound: E-coefficient of F must be -r");
  if (F.h.get_den() != 1)
    throw std::invalid_argument("compose_bound: H-coefficient of F must be an integer");
  mpz_class e = F.h.get_num() - n;
  return static_cast<int>(e.get_si());
}

Singularity lc_multiplicity_criterion(const std::vector<int>& multiplicities,
                                      const std::vector<int>& codims) {
  if (multiplicities.size() != codims.size())
    throw std::invalid_argument("lc_multiplicity_criterion: length mismatch");
  bool lc = true, strict = true;
  for (std::size_t j = 0; j < codims.size(); ++j) {
    lc = lc && multiplicities[j] <= codims[j];
    strict = strict && multiplicities[j] < codims[j];
  }
  if (!lc)
    return Singularity::NotLc;
  return strict ? Singularity::Plt : Singularity::Lc;
}

} // namespace embvan
