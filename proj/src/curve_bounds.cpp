#include "embvan/curve_bounds.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace embvan {

CurveSetup::CurveSetup(int genus, int degree) : g(genus), d(degree) {
  if (g < 0)
    throw std::invalid_argument("genus must be nonnegative");
  if (d < 3)
    throw std::invalid_argument("divisor degree must be at least 3");
}

CurveClassVariant parse_curve_variant(const std::string& s) {
  if (s == "a")
    return CurveClassVariant::A;
  if (s == "b")
    return CurveClassVariant::B;
  if (s == "c")
    return CurveClassVariant::C;
  throw std::invalid_argument("unknown class variant '" + s + "' (expected a, b or c)");
}

DivisorClass curve_lc_class(int g, int d, CurveClassVariant v) {
  CurveSetup cs(g, d);
  switch (v) {
  case CurveClassVariant::A:
    return DivisorClass(d - 1, -(d - 3));
  case CurveClassVariant::B:
    if (g <= 0)
      throw std::invalid_argument("class (b) needs positive genus");
    return DivisorClass(d, -(d - 2));
  case CurveClassVariant::C:
    if (g <= 0 || d <= 4)
      throw std::invalid_argument("class (c) needs positive genus and d > 4");
    return DivisorClass(d, -(d - 2)) * epsilon_cap(g, d);
  }
  return {};
}

int low_genus_bound(int g, int d) {
  if (g != 0 && g != 1)
    throw std::invalid_argument("low_genus_bound: genus must be 0 or 1");
  if (d < 4)
    throw std::invalid_argument("low_genus_bound: needs d >= 4 so that d_Y = 2");
  CurveSetup cs(g, d);
  const int n = cs.n();
  const DivisorClass F = curve_lc_class(g, d, g == 0 ? CurveClassVariant::A : CurveClassVariant::B);
  if (!(F == DivisorClass(n + 1, -(n - 1))))
    throw std::logic_error("low_genus_bound: class " + F.to_string() + " is not (n+1)H - (n-1)E");
  return compose_bound(F, n, cs.codim(), Singularity::Lc);
}

mpq_class epsilon_cap(int g, int d) {
  if (d <= 4)
    throw std::invalid_argument("epsilon_cap: needs d > 4");
  mpq_class c(d + g - 5, d - 4);
  c.canonicalize();
  return c;
}

nlohmann::json ConditionsReport::to_json() const {
  return {{"i", {{"lhs", lhs_i.get_str()}, {"rhs", rhs_i.get_str()}, {"holds", holds_i},
                 {"strict", strict_i}}},
          {"ii", {{"lhs", lhs_ii.get_str()}, {"rhs", rhs_ii.get_str()}, {"holds", holds_ii},
                  {"strict", strict_ii}}},
          {"sufficient", sufficient}};
}

ConditionsReport conditions_check(const CurveVanishingQuery& q) {
  if (q.d <= 4)
    throw std::invalid_argument("conditions_check: needs d > 4");
  if (q.g < 0 || q.k < 1)
    throw std::invalid_argument("conditions_check: needs g >= 0 and k >= 1");
  const mpq_class cap = epsilon_cap(q.g, q.d);
  if (sgn(q.eps) <= 0 || q.eps > cap)
    throw std::invalid_argument("conditions_check: epsilon' must lie in (0, " + cap.get_str() + "]");
  ConditionsReport r;
  r.lhs_i = q.p + q.d * q.eps;
  r.rhs_i = 2 * (q.k - 1 + (q.d - 2) * q.eps);
  r.lhs_ii = q.k - 1 + (q.d - 2) * q.eps;
  r.rhs_ii = mpq_class(2 * q.g - 2, q.d - 4);
  r.rhs_ii.canonicalize();
  r.holds_i = r.lhs_i >= r.rhs_i;
  r.strict_i = r.lhs_i > r.rhs_i;
  r.holds_ii = r.lhs_ii >= r.rhs_ii;
  r.strict_ii = r.lhs_ii > r.rhs_ii;
  r.sufficient = r.holds_i && r.holds_ii && (r.strict_i || r.strict_ii);
  return r;
}

bool conditions_satisfiable(int g, int d, int k, int p) {
  const mpq_class cap = epsilon_cap(g, d);
  mpq_class bound_i(p - 2 * k + 2, d - 4);
  bound_i.canonicalize();
  const mpq_class eps = std::min(bound_i, cap);
  if (sgn(eps) <= 0)
    return false;
  // Lowering eps below this value can only make (i) strict at the price of
  // (ii); if (ii) is strict here that price is not needed, and if it is
  // tight any lower eps breaks it. So this single evaluation is exact.
  return conditions_check({g, d, k, p, eps}).sufficient;
}

int degree_threshold(int g) {
  if (g < 0)
    throw std::invalid_argument("degree_threshold: genus must be nonnegative");
  // Smallest integer strictly above (2g+8)/3.
  const int above = (2 * g + 8) / 3 + 1;
  return std::max(above, 5);
}

bool ExceptionRegion::contains(int k, int p) const {
  return std::find(cells.begin(), cells.end(), std::make_pair(k, p)) != cells.end();
}

std::string ExceptionRegion::to_csv() const {
  std::ostringstream os;
  os << "k,p_min_failing,p_max_failing\n";
  for (const auto& row : rows)
    os << row.k << ',' << row.p_min << ',' << row.p_max << '\n';
  return os.str();
}

nlohmann::json ExceptionRegion::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& row : rows)
    arr.push_back({{"k", row.k}, {"p_min_failing", row.p_min}, {"p_max_failing", row.p_max}});
  return {{"g", g}, {"d", d}, {"empty", empty()}, {"cells", cells.size()}, {"rows", arr}};
}

ExceptionRegion exception_region(int g, int d) {
  if (d < 5)
    throw std::invalid_argument("exception_region: needs d >= 5");
  CurveSetup cs(g, d);
  ExceptionRegion reg;
  reg.g = g;
  reg.d = d;
  if (g <= 1)
    return reg;
  // At eps' = 1/(d-4) condition (ii) is strict once (k-1)(d-4) > 2g-d, so
  // the scan stops there; the check after the loop confirms it.
  int k = 3;
  for (; (k - 1) * (d - 4) <= 2 * g - d; ++k) {
    const int p0 = 2 * k - 1;
    int p = p0;
    // At a = p - p0 >= d+g-5 the cap is reached and (i) is strict, so the
    // loop always terminates well before this guard.
    const int guard = p0 + d + g;
    while (!conditions_satisfiable(g, d, k, p)) {
      reg.cells.emplace_back(k, p);
      if (++p > guard)
        throw std::logic_error("exception_region: region unbounded in p");
    }
    if (p > p0)
      reg.rows.push_back({k, p0, p - 1});
  }
  if (!conditions_satisfiable(g, d, k, 2 * k - 1))
    throw std::logic_error("exception_region: k bound is not tight");
  return reg;
}

} // namespace embvan
