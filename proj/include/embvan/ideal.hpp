#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "embvan/groebner.hpp"
#include "embvan/linalg.hpp"
#include "embvan/polynomial.hpp"

namespace embvan {

template <class F>
ModVec<F> to_modvec(const Polynomial<F>& f, int comp = 0) {
  ModVec<F> v;
  v.reserve(f.terms.size());
  for (const auto& t : f.terms)
    v.push_back({t.mono, comp, t.coef});
  return v;
}

template <class F>
Polynomial<F> from_modvec(const ModVec<F>& v) {
  Polynomial<F> f;
  f.terms.reserve(v.size());
  for (const auto& t : v)
    f.terms.push_back({t.mono, t.coef});
  return f;
}

template <class F>
void check_variables(const PolyRing<F>& ring, const Polynomial<F>& f) {
  for (const auto& t : f.terms)
    for (int i = ring.nvars(); i < kMaxVars; ++i)
      if (t.mono[i] != 0)
        throw std::invalid_argument("polynomial uses variable x" + std::to_string(i) +
                                    " outside a ring of " + std::to_string(ring.nvars()) +
                                    " variables");
}

/// Homogeneous ideal in a polynomial ring. Zero generators are dropped and
/// generators equal up to a scalar are kept once.
template <class F>
class GradedIdeal {
public:
  GradedIdeal() : ring_(F(), 1) {}
  GradedIdeal(PolyRing<F> ring, std::vector<Polynomial<F>> gens) : ring_(std::move(ring)) {
    for (auto& g : gens) {
      check_variables(ring_, g);
      g = ring_.adopt(g);
      if (g.is_zero())
        continue;
      if (!ring_.is_homogeneous(g))
        throw std::invalid_argument("GradedIdeal: generator is not homogeneous");
      Polynomial<F> monic = ring_.make_monic(g);
      if (std::find(monic_.begin(), monic_.end(), monic) != monic_.end())
        continue;
      monic_.push_back(std::move(monic));
      gens_.push_back(std::move(g));
    }
  }

  const PolyRing<F>& ring() const { return ring_; }
  int nvars() const { return ring_.nvars(); }
  const std::vector<Polynomial<F>>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& g : gens_)
      d.push_back(ring_.degree(g));
    return d;
  }

private:
  PolyRing<F> ring_;
  std::vector<Polynomial<F>> gens_;
  std::vector<Polynomial<F>> monic_;
};

/// Remainder of f under full multivariate division by G (any generating set
/// with nonzero elements); zero iff f lies in the ideal when G is a Groebner basis.
template <class F>
Polynomial<F> normal_form(const PolyRing<F>& ring, const Polynomial<F>& f,
                          const std::vector<Polynomial<F>>& G) {
  check_variables(ring, f);
  const F& field = ring.field();
  Polynomial<F> p = ring.adopt(f);
  std::vector<Term<F>> rem;
  while (!p.is_zero()) {
    const Term<F>& lt = p.lead();
    const Polynomial<F>* div = nullptr;
    for (const auto& g : G)
      if (!g.is_zero() && divides(g.lead().mono, lt.mono)) {
        div = &g;
        break;
      }
    if (!div) {
      rem.push_back(lt);
      p.terms.erase(p.terms.begin());
      continue;
    }
    const auto c = field.div(lt.coef, div->lead().coef);
    p = ring.sub_mul(p, c, lt.mono / div->lead().mono, *div);
  }
  Polynomial<F> r;
  r.terms = std::move(rem);
  return r;
}

template <class F>
Polynomial<F> s_polynomial(const PolyRing<F>& ring, const Polynomial<F>& f,
                           const Polynomial<F>& g) {
  if (f.is_zero() || g.is_zero())
    return ring.zero();
  const F& field = ring.field();
  const Monomial l = lcm(f.lead().mono, g.lead().mono);
  return ring.sub(ring.mul_term(f, l / f.lead().mono, field.inv(f.lead().coef)),
                  ring.mul_term(g, l / g.lead().mono, field.inv(g.lead().coef)));
}

/// Reduced Groebner basis of a polynomial list in `ring`'s order.
template <class F>
std::vector<Polynomial<F>> groebner_basis(const PolyRing<F>& ring,
                                          const std::vector<Polynomial<F>>& gens,
                                          ComputeBudget budget = {}) {
  std::vector<int> twist{0};
  ModuleOrder order = ModuleOrder::term_over_position(ring.order(), twist);
  ModuleGroebner<F> gb(ring.field(), order, budget);
  std::vector<ModVec<F>> input;
  for (const auto& g : gens) {
    check_variables(ring, g);
    input.push_back(to_modvec(ring.adopt(g)));
  }
  std::vector<Polynomial<F>> out;
  for (const auto& v : gb.compute(input))
    out.push_back(from_modvec(v));
  return out;
}

/// Reduced Groebner basis for an order named "grevlex", "lex" or "deglex".
/// Every input generator is re-checked to reduce to zero.
template <class F>
std::vector<Polynomial<F>> groebner_basis(const GradedIdeal<F>& I, const std::string& order) {
  const PolyRing<F> ring(I.ring().field(), MonomialOrder::parse(I.nvars(), order));
  auto G = groebner_basis(ring, I.generators());
  for (const auto& g : I.generators())
    if (!normal_form(ring, g, G).is_zero())
      throw std::logic_error("groebner_basis: generator does not reduce to zero");
  return G;
}

/// Drops generators lying in the ideal of earlier (lower or equal degree)
/// accepted ones, by graded linear algebra degree by degree.
template <class F>
std::vector<Polynomial<F>> minimize_generators(const PolyRing<F>& ring,
                                               std::vector<Polynomial<F>> gens) {
  std::stable_sort(gens.begin(), gens.end(), [&](const auto& a, const auto& b) {
    return ring.degree(a) < ring.degree(b);
  });
  std::vector<Polynomial<F>> accepted;
  std::size_t i = 0;
  while (i < gens.size()) {
    const int d = ring.degree(gens[i]);
    if (d < 0) {
      ++i;
      continue;
    }
    std::unordered_map<Monomial, int, MonomialHash> index;
    auto to_row = [&](const Polynomial<F>& p) {
      SparseRow<F> row;
      for (const auto& t : p.terms) {
        auto [it, fresh] = index.emplace(t.mono, static_cast<int>(index.size()));
        row.emplace_back(it->second, t.coef);
      }
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      return row;
    };
    SparseEchelon<F> span(ring.field());
    for (const auto& a : accepted) {
      const int da = ring.degree(a);
      for (const auto& m : monomials_of_degree(ring.nvars(), d - da))
        span.insert(to_row(ring.mul_term(a, m, ring.field().one())));
    }
    for (; i < gens.size() && ring.degree(gens[i]) == d; ++i)
      if (span.insert(to_row(gens[i])))
        accepted.push_back(gens[i]);
  }
  return accepted;
}

/// k-th power of an ideal: all k-fold products of generators, with redundant
/// products removed.
template <class F>
GradedIdeal<F> ideal_power(const GradedIdeal<F>& I, int k) {
  if (k < 1)
    throw std::invalid_argument("ideal_power: k must be positive");
  const auto& ring = I.ring();
  const auto& g = I.generators();
  std::vector<Polynomial<F>> products;
  // Multisets of generator indices, nondecreasing.
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  if (!g.empty()) {
    while (true) {
      Polynomial<F> p = ring.one();
      for (auto j : idx)
        p = ring.mul(p, g[j]);
      products.push_back(std::move(p));
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == g.size() - 1)
        --pos;
      if (pos < 0)
        break;
      const std::size_t v = idx[static_cast<std::size_t>(pos)] + 1;
      for (int q = pos; q < k; ++q)
        idx[static_cast<std::size_t>(q)] = v;
    }
  }
  return GradedIdeal<F>(ring, minimize_generators(ring, std::move(products)));
}

} // namespace embvan
