#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "embvan/groebner.hpp"
#include "embvan/ideal.hpp"
#include "embvan/linalg.hpp"

namespace embvan {

/// Graded module given as the cokernel of a matrix of homogeneous forms
/// between free modules. Column j lives in ⊕ S(-target_degrees[r]).
template <class F>
struct GradedModulePresentation {
  std::vector<int> target_degrees;
  std::vector<std::vector<Polynomial<F>>> columns;

  int rank() const { return static_cast<int>(target_degrees.size()); }
};

template <class F>
GradedModulePresentation<F> presentation_of(const GradedIdeal<F>& I) {
  GradedModulePresentation<F> p;
  p.target_degrees = {0};
  for (const auto& g : I.generators())
    p.columns.push_back({g});
  return p;
}

// Degree of a homogeneous column, or nullopt for a zero column. Throws if the
// column is not homogeneous with respect to the target degrees.
template <class F>
std::optional<int> column_degree(const PolyRing<F>& ring, const GradedModulePresentation<F>& p,
                                 std::size_t j) {
  const auto& col = p.columns[j];
  if (col.size() != p.target_degrees.size())
    throw std::invalid_argument("presentation column has wrong length");
  std::optional<int> deg;
  for (std::size_t r = 0; r < col.size(); ++r) {
    if (col[r].is_zero())
      continue;
    if (!ring.is_homogeneous(col[r]))
      throw std::invalid_argument("presentation entry is not homogeneous");
    const int d = ring.degree(col[r]) + p.target_degrees[r];
    if (deg && *deg != d)
      throw std::invalid_argument("presentation column is not homogeneous");
    deg = d;
  }
  return deg;
}

template <class F>
ModVec<F> column_to_modvec(const ModuleArith<F>& arith, const std::vector<Polynomial<F>>& col) {
  ModVec<F> v;
  for (std::size_t r = 0; r < col.size(); ++r)
    for (const auto& t : col[r].terms)
      v.push_back({t.mono, static_cast<int>(r), t.coef});
  return arith.normalize(std::move(v));
}

template <class F>
std::vector<Polynomial<F>> modvec_to_column(const PolyRing<F>& ring, const ModVec<F>& v,
                                            int rank) {
  std::vector<std::vector<Term<F>>> parts(static_cast<std::size_t>(rank));
  for (const auto& t : v)
    parts[static_cast<std::size_t>(t.comp)].push_back({t.mono, t.coef});
  std::vector<Polynomial<F>> col;
  for (auto& p : parts)
    col.push_back(ring.normalize(std::move(p)));
  return col;
}

/// Sparse matrix of polynomials stored by columns.
template <class F>
struct PolyMatrix {
  int rows = 0;
  std::vector<std::map<int, Polynomial<F>>> cols;

  int ncols() const { return static_cast<int>(cols.size()); }
  Polynomial<F> entry(int r, int c) const {
    const auto& col = cols[static_cast<std::size_t>(c)];
    auto it = col.find(r);
    return it == col.end() ? Polynomial<F>{} : it->second;
  }
};

template <class F>
PolyMatrix<F> multiply(const PolyRing<F>& ring, const PolyMatrix<F>& a, const PolyMatrix<F>& b) {
  PolyMatrix<F> c;
  c.rows = a.rows;
  for (const auto& bcol : b.cols) {
    std::map<int, Polynomial<F>> out;
    for (const auto& [k, bk] : bcol)
      for (const auto& [r, ark] : a.cols[static_cast<std::size_t>(k)]) {
        auto& slot = out[r];
        slot = ring.add(slot, ring.mul(ark, bk));
      }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    c.cols.push_back(std::move(out));
  }
  return c;
}

/// Graded free resolution F_0 <- F_1 <- ... ; F_q = ⊕ S(-twists[q][t]) and
/// maps[q] : F_{q+1} -> F_q.
template <class F>
struct FreeResolution {
  std::vector<std::vector<int>> twists;
  std::vector<PolyMatrix<F>> maps;

  int length() const { return static_cast<int>(twists.size()) - 1; }
  int rank(int q) const {
    return q < 0 || q >= static_cast<int>(twists.size())
               ? 0
               : static_cast<int>(twists[static_cast<std::size_t>(q)].size());
  }

  // betti()[q][a] = number of generators of F_q in degree a.
  std::vector<std::map<int, int>> betti() const {
    std::vector<std::map<int, int>> b;
    for (const auto& tw : twists) {
      std::map<int, int> row;
      for (int a : tw)
        ++row[a];
      b.push_back(std::move(row));
    }
    return b;
  }

  std::vector<int> total_betti() const {
    std::vector<int> b;
    for (const auto& tw : twists)
      b.push_back(static_cast<int>(tw.size()));
    return b;
  }
};

namespace detail {

// S-pair syzygies of a Groebner basis `elems` (monic leading terms) of a
// submodule of the free module ordered by `prev`. Returns the Schreyer
// syzygies with leading terms not divisible by one another, as vectors in the
// free module with basis `elems`, ordered by `next`.
template <class F>
std::vector<ModVec<F>> schreyer_syzygies(const F& field, const ModuleOrder& prev,
                                         const std::vector<ModVec<F>>& elems,
                                         const ModuleOrder& next, const ComputeBudget& budget) {
  ModuleArith<F> pa(field, prev);
  ModuleArith<F> na(field, next);
  std::map<int, std::vector<int>> by_comp;
  for (std::size_t i = 0; i < elems.size(); ++i)
    by_comp[elems[i].front().comp].push_back(static_cast<int>(i));

  std::vector<ModVec<F>> out;
  for (const auto& [comp, idx] : by_comp) {
    for (std::size_t ia = 0; ia < idx.size(); ++ia) {
      const int a = idx[ia];
      const Monomial& la = elems[static_cast<std::size_t>(a)].front().mono;
      // Candidate leading monomials lcm/la; keep the divisibility-minimal ones.
      std::vector<std::pair<Monomial, int>> cands;
      for (std::size_t ib = ia + 1; ib < idx.size(); ++ib) {
        const int b = idx[ib];
        cands.emplace_back(lcm(la, elems[static_cast<std::size_t>(b)].front().mono) / la, b);
      }
      std::vector<bool> keep(cands.size(), true);
      for (std::size_t x = 0; x < cands.size(); ++x)
        for (std::size_t y = 0; y < cands.size() && keep[x]; ++y) {
          if (x == y || !keep[y])
            continue;
          if (divides(cands[y].first, cands[x].first) &&
              (cands[y].first != cands[x].first || y < x))
            keep[x] = false;
        }
      for (std::size_t x = 0; x < cands.size(); ++x) {
        if (!keep[x])
          continue;
        budget.check_time();
        const int b = cands[x].second;
        const Monomial ma = cands[x].first;
        const Monomial l = ma * la;
        const Monomial mb = l / elems[static_cast<std::size_t>(b)].front().mono;
        budget.check_degree(l.deg + prev.twist(comp));
        ModVec<F> s = pa.sub_mul(pa.mul_term(elems[static_cast<std::size_t>(a)], ma, field.one()),
                                 0, field.one(), mb, elems[static_cast<std::size_t>(b)]);
        ModVec<F> tau{{ma, a, field.one()}, {mb, b, field.neg(field.one())}};
        while (!s.empty()) {
          const auto& lt = s.front();
          int d = -1;
          for (int k : by_comp[lt.comp])
            if (divides(elems[static_cast<std::size_t>(k)].front().mono, lt.mono)) {
              d = k;
              break;
            }
          if (d < 0)
            throw std::logic_error("schreyer_syzygies: S-vector does not reduce to zero");
          const Monomial q = lt.mono / elems[static_cast<std::size_t>(d)].front().mono;
          const auto c = lt.coef;
          tau.push_back({q, d, field.neg(c)});
          s = pa.sub_mul(s, 0, c, q, elems[static_cast<std::size_t>(d)]);
        }
        tau = na.normalize(std::move(tau));
        if (tau.empty() || tau.front().comp != a || tau.front().mono != ma)
          throw std::logic_error("schreyer_syzygies: unexpected leading term");
        out.push_back(std::move(tau));
      }
    }
  }
  return out;
}

// Orders basis elements by leading component, then by descending exponent of
// variable `var` in the leading monomial; this keeps Schreyer resolutions
// within the Hilbert syzygy bound.
template <class F>
void sort_for_length(const ModuleArith<F>& arith, std::vector<ModVec<F>>& elems, int var) {
  std::stable_sort(elems.begin(), elems.end(), [&](const ModVec<F>& x, const ModVec<F>& y) {
    if (x.front().comp != y.front().comp)
      return x.front().comp < y.front().comp;
    const int ex = x.front().mono[var], ey = y.front().mono[var];
    if (ex != ey)
      return ex > ey;
    return arith.cmp(x.front(), y.front()) > 0;
  });
}

template <class F>
std::vector<std::pair<Monomial, int>> leads(const std::vector<ModVec<F>>& elems) {
  std::vector<std::pair<Monomial, int>> l;
  for (const auto& e : elems)
    l.emplace_back(e.front().mono, e.front().comp);
  return l;
}

template <class F>
std::vector<int> degrees(const ModuleArith<F>& arith, const std::vector<ModVec<F>>& elems) {
  std::vector<int> d;
  for (const auto& e : elems)
    d.push_back(arith.degree(e));
  return d;
}

template <class F>
bool is_unit(const Polynomial<F>& p) {
  return p.terms.size() == 1 && p.terms.front().mono.is_one();
}

// Removes unit entries: each one splits off a trivial summand
// 0 -> S(-a) -> S(-a) -> 0 from the complex.
template <class F>
void prune_units(const PolyRing<F>& ring, std::vector<std::vector<int>>& twists,
                 std::vector<PolyMatrix<F>>& maps) {
  const F& field = ring.field();
  std::vector<std::vector<bool>> alive;
  for (const auto& t : twists)
    alive.emplace_back(t.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q < maps.size(); ++q) {
      auto& m = maps[q];
      for (int c = 0; c < m.ncols(); ++c) {
        if (!alive[q + 1][static_cast<std::size_t>(c)])
          continue;
        auto& col = m.cols[static_cast<std::size_t>(c)];
        int r = -1;
        for (const auto& [row, p] : col)
          if (is_unit(p)) {
            r = row;
            break;
          }
        if (r < 0)
          continue;
        const auto u_inv = field.inv(col.at(r).terms.front().coef);
        const auto pivot = col;
        for (int c2 = 0; c2 < m.ncols(); ++c2) {
          if (c2 == c || !alive[q + 1][static_cast<std::size_t>(c2)])
            continue;
          auto& col2 = m.cols[static_cast<std::size_t>(c2)];
          auto it = col2.find(r);
          if (it == col2.end())
            continue;
          const Polynomial<F> lambda = ring.scale(it->second, u_inv);
          for (const auto& [row, p] : pivot) {
            auto& slot = col2[row];
            slot = ring.sub(slot, ring.mul(lambda, p));
            if (slot.is_zero())
              col2.erase(row);
          }
        }
        m.cols[static_cast<std::size_t>(c)].clear();
        alive[q + 1][static_cast<std::size_t>(c)] = false;
        alive[q][static_cast<std::size_t>(r)] = false;
        for (auto& col2 : m.cols)
          col2.erase(r);
        if (q + 1 < maps.size())
          for (auto& col2 : maps[q + 1].cols)
            col2.erase(c);
        if (q > 0)
          maps[q - 1].cols[static_cast<std::size_t>(r)].clear();
        changed = true;
      }
    }
  }
  // Compact.
  std::vector<std::vector<int>> renum(twists.size());
  std::vector<std::vector<int>> new_twists(twists.size());
  for (std::size_t q = 0; q < twists.size(); ++q) {
    renum[q].assign(twists[q].size(), -1);
    for (std::size_t i = 0; i < twists[q].size(); ++i)
      if (alive[q][i]) {
        renum[q][i] = static_cast<int>(new_twists[q].size());
        new_twists[q].push_back(twists[q][i]);
      }
  }
  std::vector<PolyMatrix<F>> new_maps;
  for (std::size_t q = 0; q < maps.size(); ++q) {
    PolyMatrix<F> nm;
    nm.rows = static_cast<int>(new_twists[q].size());
    for (std::size_t c = 0; c < maps[q].cols.size(); ++c) {
      if (!alive[q + 1][c])
        continue;
      std::map<int, Polynomial<F>> col;
      for (auto& [r, p] : maps[q].cols[c])
        col.emplace(renum[q][static_cast<std::size_t>(r)], std::move(p));
      nm.cols.push_back(std::move(col));
    }
    new_maps.push_back(std::move(nm));
  }
  twists = std::move(new_twists);
  maps = std::move(new_maps);
}

} // namespace detail

/// Minimal graded free resolution of coker(presentation), computed as a
/// Schreyer resolution and then minimized by splitting off unit entries.
template <class F>
FreeResolution<F> free_resolution(const PolyRing<F>& ring, const GradedModulePresentation<F>& pres,
                                  const ComputeBudget& budget = {}) {
  const F& field = ring.field();
  const int N = ring.nvars();
  const int rank = pres.rank();
  std::vector<ModuleOrder> orders;
  orders.push_back(ModuleOrder::term_over_position(ring.order(), pres.target_degrees));

  std::vector<ModVec<F>> cols;
  {
    ModuleArith<F> a0(field, orders[0]);
    for (std::size_t j = 0; j < pres.columns.size(); ++j) {
      if (!column_degree(ring, pres, j))
        continue;
      cols.push_back(column_to_modvec(a0, pres.columns[j]));
    }
  }
  ModuleGroebner<F> gb(field, orders[0], budget);
  std::vector<ModVec<F>> elems = gb.compute(cols);

  std::vector<std::vector<int>> twists{pres.target_degrees};
  std::vector<std::vector<ModVec<F>>> levels;  // levels[L] = basis images of F_{L+1} in F_L
  for (int L = 1; !elems.empty(); ++L) {
    budget.check_time();
    ModuleArith<F> prev_arith(field, orders.back());
    detail::sort_for_length(prev_arith, elems, std::min(L - 1, N - 1));
    auto tw = detail::degrees(prev_arith, elems);
    orders.push_back(ModuleOrder::schreyer(orders.back(), detail::leads(elems), tw));
    twists.push_back(tw);
    auto next = detail::schreyer_syzygies(field, orders[orders.size() - 2], elems, orders.back(),
                                          budget);
    levels.push_back(std::move(elems));
    elems = std::move(next);
    if (L > N + 2)
      throw std::logic_error("free_resolution: Schreyer resolution exceeds syzygy bound");
  }

  std::vector<PolyMatrix<F>> maps;
  for (std::size_t L = 0; L < levels.size(); ++L) {
    PolyMatrix<F> m;
    m.rows = static_cast<int>(twists[L].size());
    for (const auto& v : levels[L]) {
      auto col = modvec_to_column(ring, v, m.rows);
      std::map<int, Polynomial<F>> sparse;
      for (std::size_t r = 0; r < col.size(); ++r)
        if (!col[r].is_zero())
          sparse.emplace(static_cast<int>(r), std::move(col[r]));
      m.cols.push_back(std::move(sparse));
    }
    maps.push_back(std::move(m));
  }
  (void)rank;
  detail::prune_units(ring, twists, maps);
  while (twists.size() > 1 && twists.back().empty()) {
    twists.pop_back();
    maps.pop_back();
  }
  FreeResolution<F> res{std::move(twists), std::move(maps)};
  if (res.length() > N)
    throw std::logic_error("free_resolution: minimal resolution longer than variable count");
  return res;
}

/// Minimal free resolution of the ideal itself (as a module), obtained from
/// the resolution of S/I by dropping F_0.
template <class F>
FreeResolution<F> resolve_ideal(const GradedIdeal<F>& I, const ComputeBudget& budget = {}) {
  auto res = free_resolution(I.ring(), presentation_of(I), budget);
  if (res.twists.size() <= 1)
    return FreeResolution<F>{{{}}, {}};
  res.twists.erase(res.twists.begin());
  res.maps.erase(res.maps.begin());
  return res;
}

/// Dimension of S_d for S with `nvars` variables (zero for d < 0).
inline mpz_class ring_piece_dim(int nvars, int d) {
  if (d < 0)
    return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(d + nvars - 1),
               static_cast<unsigned long>(nvars - 1));
  return r;
}

/// Hilbert function from the graded Betti numbers (alternating sum).
template <class F>
long long hilbert_function_from_resolution(const FreeResolution<F>& res, int nvars, int d) {
  mpz_class sum = 0;
  for (std::size_t q = 0; q < res.twists.size(); ++q)
    for (int a : res.twists[q]) {
      if (q % 2 == 0)
        sum += ring_piece_dim(nvars, d - a);
      else
        sum -= ring_piece_dim(nvars, d - a);
    }
  return sum.get_si();
}

/// Hilbert function by counting standard monomials of the initial module.
template <class F>
long long hilbert_function_from_initial(const PolyRing<F>& ring,
                                        const GradedModulePresentation<F>& pres, int d) {
  const ModuleOrder order = ModuleOrder::term_over_position(ring.order(), pres.target_degrees);
  ModuleArith<F> arith(ring.field(), order);
  std::vector<ModVec<F>> cols;
  for (std::size_t j = 0; j < pres.columns.size(); ++j)
    if (column_degree(ring, pres, j))
      cols.push_back(column_to_modvec(arith, pres.columns[j]));
  ModuleGroebner<F> gb(ring.field(), order);
  const auto G = gb.compute(cols);
  long long count = 0;
  for (int c = 0; c < pres.rank(); ++c) {
    const int e = d - pres.target_degrees[static_cast<std::size_t>(c)];
    if (e < 0)
      continue;
    for (const auto& m : monomials_of_degree(ring.nvars(), e)) {
      bool standard = true;
      for (const auto& g : G)
        if (g.front().comp == c && divides(g.front().mono, m)) {
          standard = false;
          break;
        }
      count += standard ? 1 : 0;
    }
  }
  return count;
}

/// Hilbert function of coker(presentation) in degree d, computed both from
/// the initial module and from the resolution; throws if they disagree.
template <class F>
long long hilbert_function(const PolyRing<F>& ring, const GradedModulePresentation<F>& pres,
                           int d) {
  const long long a = hilbert_function_from_initial(ring, pres, d);
  const long long b = hilbert_function_from_resolution(free_resolution(ring, pres), ring.nvars(), d);
  if (a != b)
    throw std::logic_error("hilbert_function: initial-module count " + std::to_string(a) +
                           " disagrees with resolution count " + std::to_string(b));
  return a;
}

namespace detail {

// Keeps a minimal subset of homogeneous module elements generating the same
// submodule, processing degrees in increasing order.
template <class F>
std::vector<ModVec<F>> minimize_module_generators(const PolyRing<F>& ring,
                                                  const ModuleArith<F>& arith,
                                                  std::vector<ModVec<F>> gens) {
  std::erase_if(gens, [](const auto& v) { return v.empty(); });
  std::stable_sort(gens.begin(), gens.end(), [&](const auto& a, const auto& b) {
    return arith.degree(a) < arith.degree(b);
  });
  std::vector<ModVec<F>> accepted;
  std::size_t i = 0;
  while (i < gens.size()) {
    const int d = arith.degree(gens[i]);
    std::map<std::pair<int, std::vector<int>>, int> index;
    auto to_row = [&](const ModVec<F>& v) {
      SparseRow<F> row;
      for (const auto& t : v) {
        std::vector<int> e(t.mono.exp.begin(), t.mono.exp.begin() + ring.nvars());
        auto [it, fresh] = index.emplace(std::make_pair(t.comp, std::move(e)),
                                         static_cast<int>(index.size()));
        row.emplace_back(it->second, t.coef);
      }
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      return row;
    };
    SparseEchelon<F> span(ring.field());
    for (const auto& a : accepted)
      for (const auto& m : monomials_of_degree(ring.nvars(), d - arith.degree(a)))
        span.insert(to_row(arith.mul_term(a, m, ring.field().one())));
    for (; i < gens.size() && arith.degree(gens[i]) == d; ++i)
      if (span.insert(to_row(gens[i])))
        accepted.push_back(gens[i]);
  }
  return accepted;
}

} // namespace detail

/// Kernel of the presentation matrix, via a tracked Groebner basis of its
/// columns and the Schreyer syzygies of that basis, lifted back and minimized.
/// The result presents the kernel: its target degrees are the column degrees
/// of the input.
template <class F>
GradedModulePresentation<F> syzygies(const PolyRing<F>& ring,
                                     const GradedModulePresentation<F>& pres,
                                     const ComputeBudget& budget = {}) {
  const F& field = ring.field();
  const ModuleOrder order = ModuleOrder::term_over_position(ring.order(), pres.target_degrees);
  ModuleArith<F> arith(field, order);
  std::vector<int> col_deg;
  std::vector<ModVec<F>> cols;
  for (std::size_t j = 0; j < pres.columns.size(); ++j) {
    auto d = column_degree(ring, pres, j);
    if (!d)
      throw std::invalid_argument("syzygies: zero column has no degree");
    col_deg.push_back(*d);
    cols.push_back(column_to_modvec(arith, pres.columns[j]));
  }
  const ModuleOrder rep_order = ModuleOrder::term_over_position(ring.order(), col_deg);
  ModuleArith<F> rep(field, rep_order);

  ModuleGroebner<F> gb(field, order, budget);
  gb.enable_tracking(col_deg);
  auto G = gb.compute(cols);
  const auto T = gb.representations();

  std::vector<ModVec<F>> candidates;
  if (!G.empty()) {
    const ModuleOrder sch = ModuleOrder::schreyer(order, detail::leads(G), detail::degrees(arith, G));
    for (const auto& tau : detail::schreyer_syzygies(field, order, G, sch, budget)) {
      ModVec<F> lifted;
      for (const auto& t : tau)
        lifted = rep.sub_mul(lifted, 0, field.neg(t.coef), t.mono,
                             T[static_cast<std::size_t>(t.comp)]);
      candidates.push_back(std::move(lifted));
    }
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    std::vector<QuotientTerm<F>> quot;
    if (!module_normal_form(arith, cols[i], G, &quot).empty())
      throw std::logic_error("syzygies: column does not reduce to zero");
    ModVec<F> v{{Monomial{}, static_cast<int>(i), field.one()}};
    for (const auto& q : quot)
      v = rep.sub_mul(v, 0, q.coef, q.mono, T[static_cast<std::size_t>(q.index)]);
    candidates.push_back(std::move(v));
  }
  auto minimal = detail::minimize_module_generators(ring, rep, std::move(candidates));

  GradedModulePresentation<F> out;
  out.target_degrees = col_deg;
  for (const auto& v : minimal)
    out.columns.push_back(modvec_to_column(ring, v, static_cast<int>(col_deg.size())));
  return out;
}

} // namespace embvan
