#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "embvan/field.hpp"
#include "embvan/monomial.hpp"

namespace embvan {

template <class F>
struct Term {
  Monomial mono;
  typename F::Elem coef;
};

/// Sparse polynomial; terms are kept strictly decreasing in the owning ring's
/// monomial order with no zero coefficients. All arithmetic goes through a
/// PolyRing, which knows the field and the order.
template <class F>
struct Polynomial {
  std::vector<Term<F>> terms;

  bool is_zero() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }
  const Term<F>& lead() const { return terms.front(); }

  bool operator==(const Polynomial& o) const {
    if (terms.size() != o.terms.size())
      return false;
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (terms[i].mono != o.terms[i].mono || !(terms[i].coef == o.terms[i].coef))
        return false;
    return true;
  }
};

template <class F>
class PolyRing {
public:
  using Field = F;
  using Scalar = typename F::Elem;
  using Elem = Polynomial<F>;

  PolyRing(F field, int nvars, OrderKind kind = OrderKind::Grevlex)
      : field_(std::move(field)), order_(nvars, kind) {
    if (nvars < 1 || nvars > kMaxVars)
      throw std::invalid_argument("PolyRing: variable count out of range");
  }
  PolyRing(F field, MonomialOrder order) : field_(std::move(field)), order_(order) {
    if (order.nvars() < 1 || order.nvars() > kMaxVars)
      throw std::invalid_argument("PolyRing: variable count out of range");
  }

  const F& field() const { return field_; }
  int nvars() const { return order_.nvars(); }
  const MonomialOrder& order() const { return order_; }
  PolyRing with_order(OrderKind kind) const { return PolyRing(field_, nvars(), kind); }

  Elem zero() const { return {}; }
  Elem one() const { return constant(field_.one()); }
  Elem constant(const Scalar& c) const {
    Elem r;
    if (!field_.is_zero(c))
      r.terms.push_back({Monomial{}, c});
    return r;
  }
  Elem from_int(std::int64_t v) const { return constant(field_.from_int(v)); }
  Elem variable(int i) const {
    if (i < 0 || i >= nvars())
      throw std::out_of_range("PolyRing::variable index");
    Elem r;
    r.terms.push_back({Monomial::variable(i), field_.one()});
    return r;
  }
  Elem term(const Monomial& m, const Scalar& c) const {
    Elem r;
    if (!field_.is_zero(c))
      r.terms.push_back({m, c});
    return r;
  }

  bool is_zero(const Elem& a) const { return a.terms.empty(); }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  int compare(const Monomial& a, const Monomial& b) const { return order_.compare(a, b); }

  // Sorts, merges equal monomials and drops zero coefficients.
  Elem normalize(std::vector<Term<F>> terms) const {
    std::sort(terms.begin(), terms.end(), [&](const Term<F>& x, const Term<F>& y) {
      return order_.compare(x.mono, y.mono) > 0;
    });
    Elem r;
    for (auto& t : terms) {
      if (!r.terms.empty() && r.terms.back().mono == t.mono) {
        r.terms.back().coef = field_.add(r.terms.back().coef, t.coef);
      } else {
        if (!r.terms.empty() && field_.is_zero(r.terms.back().coef))
          r.terms.pop_back();
        r.terms.push_back(std::move(t));
      }
    }
    if (!r.terms.empty() && field_.is_zero(r.terms.back().coef))
      r.terms.pop_back();
    return r;
  }

  Elem add(const Elem& a, const Elem& b) const { return combine(a, b, false); }
  Elem sub(const Elem& a, const Elem& b) const { return combine(a, b, true); }
  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& t : r.terms)
      t.coef = field_.neg(t.coef);
    return r;
  }
  Elem scale(const Elem& a, const Scalar& c) const {
    if (field_.is_zero(c))
      return {};
    Elem r = a;
    for (auto& t : r.terms)
      t.coef = field_.mul(t.coef, c);
    return r;
  }
  Elem mul_term(const Elem& a, const Monomial& m, const Scalar& c) const {
    if (field_.is_zero(c))
      return {};
    Elem r;
    r.terms.reserve(a.terms.size());
    for (const auto& t : a.terms)
      r.terms.push_back({t.mono * m, field_.mul(t.coef, c)});
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    if (a.terms.empty() || b.terms.empty())
      return {};
    if (b.terms.size() == 1)
      return mul_term(a, b.lead().mono, b.lead().coef);
    if (a.terms.size() == 1)
      return mul_term(b, a.lead().mono, a.lead().coef);
    std::vector<Term<F>> prod;
    prod.reserve(a.terms.size() * b.terms.size());
    for (const auto& s : a.terms)
      for (const auto& t : b.terms)
        prod.push_back({s.mono * t.mono, field_.mul(s.coef, t.coef)});
    return normalize(std::move(prod));
  }
  Elem pow(const Elem& a, int k) const {
    if (k < 0)
      throw std::invalid_argument("PolyRing::pow negative exponent");
    Elem r = one();
    for (int i = 0; i < k; ++i)
      r = mul(r, a);
    return r;
  }
  // a - c * m * b
  Elem sub_mul(const Elem& a, const Scalar& c, const Monomial& m, const Elem& b) const {
    return sub(a, mul_term(b, m, c));
  }

  Elem make_monic(const Elem& a) const {
    if (a.terms.empty() || field_.is_one(a.lead().coef))
      return a;
    return scale(a, field_.inv(a.lead().coef));
  }

  bool is_homogeneous(const Elem& a) const {
    for (const auto& t : a.terms)
      if (t.mono.deg != a.terms.front().mono.deg)
        return false;
    return true;
  }
  // Total degree (maximum over terms); -1 for the zero polynomial.
  int degree(const Elem& a) const {
    int d = -1;
    for (const auto& t : a.terms)
      d = std::max<int>(d, t.mono.deg);
    return d;
  }
  // Smallest total degree of a term; -1 for zero.
  int low_degree(const Elem& a) const {
    if (a.terms.empty())
      return -1;
    int d = a.terms.front().mono.deg;
    for (const auto& t : a.terms)
      d = std::min<int>(d, t.mono.deg);
    return d;
  }

  Scalar evaluate(const Elem& a, std::span<const Scalar> point) const {
    if (point.size() != static_cast<std::size_t>(nvars()))
      throw std::invalid_argument("evaluate: point has wrong dimension");
    Scalar acc = field_.zero();
    for (const auto& t : a.terms) {
      Scalar v = t.coef;
      for (int i = 0; i < nvars(); ++i)
        for (int e = 0; e < t.mono[i]; ++e)
          v = field_.mul(v, point[static_cast<std::size_t>(i)]);
      acc = field_.add(acc, v);
    }
    return acc;
  }

  // Re-sorts a polynomial produced under another order of the same variables.
  Elem adopt(const Elem& a) const { return normalize(a.terms); }

private:
  Elem combine(const Elem& a, const Elem& b, bool negate_b) const {
    Elem r;
    r.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
      int c;
      if (i == a.terms.size())
        c = -1;
      else if (j == b.terms.size())
        c = 1;
      else
        c = order_.compare(a.terms[i].mono, b.terms[j].mono);
      if (c > 0) {
        r.terms.push_back(a.terms[i++]);
      } else if (c < 0) {
        const auto& t = b.terms[j++];
        r.terms.push_back({t.mono, negate_b ? field_.neg(t.coef) : t.coef});
      } else {
        auto s = negate_b ? field_.sub(a.terms[i].coef, b.terms[j].coef)
                          : field_.add(a.terms[i].coef, b.terms[j].coef);
        if (!field_.is_zero(s))
          r.terms.push_back({a.terms[i].mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  F field_;
  MonomialOrder order_;
};

using PolyGF = Polynomial<PrimeField>;
using RingGF = PolyRing<PrimeField>;
using PolyQQ = Polynomial<RationalField>;
using RingQQ = PolyRing<RationalField>;

} // namespace embvan
