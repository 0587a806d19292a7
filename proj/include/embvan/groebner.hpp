#pragma once

#include <algorithm>
#include <chrono>
#include <climits>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "embvan/polynomial.hpp"

namespace embvan {

/// Thrown when a computation exceeds its degree or wall-time allowance.
class ResourceLimitExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ComputeBudget {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  int max_degree = INT_MAX;

  static ComputeBudget unlimited() { return {}; }
  static ComputeBudget with(double seconds, int max_degree) {
    ComputeBudget b;
    if (seconds > 0)
      b.deadline = std::chrono::steady_clock::now() +
                   std::chrono::milliseconds(static_cast<std::int64_t>(seconds * 1000));
    b.max_degree = max_degree;
    return b;
  }

  void check_time() const {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
      throw ResourceLimitExceeded("wall-time cap exceeded");
  }
  void check_degree(int d) const {
    if (d > max_degree)
      throw ResourceLimitExceeded("degree cap " + std::to_string(max_degree) +
                                  " exceeded (degree " + std::to_string(d) + ")");
  }
};

template <class F>
struct ModTerm {
  Monomial mono;
  int comp;
  typename F::Elem coef;
};

/// Element of a free module: terms strictly decreasing in a ModuleOrder.
template <class F>
using ModVec = std::vector<ModTerm<F>>;

/// Monomial order on a graded free module. Either term-over-position over a
/// base monomial order, or the Schreyer order induced by the leading terms of
/// a generating set of the previous free module.
class ModuleOrder {
public:
  ModuleOrder() = default;

  static ModuleOrder term_over_position(MonomialOrder base, std::vector<int> twists) {
    ModuleOrder o;
    o.base_ = base;
    o.twists_ = std::move(twists);
    return o;
  }

  // `leads[j]` is the leading term (monomial, component) of generator j,
  // measured in `prev`.
  static ModuleOrder schreyer(const ModuleOrder& prev,
                              const std::vector<std::pair<Monomial, int>>& leads,
                              std::vector<int> twists) {
    ModuleOrder o;
    o.base_ = prev.base_;
    o.twists_ = std::move(twists);
    o.schreyer_ = true;
    const std::size_t n = leads.size();
    o.shift_.resize(n);
    o.base_comp_.resize(n);
    o.chain_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& [m, c] = leads[j];
      if (prev.schreyer_) {
        o.shift_[j] = m * prev.shift_[static_cast<std::size_t>(c)];
        o.base_comp_[j] = prev.base_comp_[static_cast<std::size_t>(c)];
        o.chain_[j] = prev.chain_[static_cast<std::size_t>(c)];
      } else {
        o.shift_[j] = m;
        o.base_comp_[j] = c;
      }
      o.chain_[j].push_back(static_cast<int>(j));
    }
    return o;
  }

  int rank() const { return static_cast<int>(twists_.size()); }
  int twist(int c) const { return twists_[static_cast<std::size_t>(c)]; }
  const std::vector<int>& twists() const { return twists_; }
  const MonomialOrder& base() const { return base_; }
  bool is_schreyer() const { return schreyer_; }

  int compare(const Monomial& a, int ca, const Monomial& b, int cb) const {
    if (!schreyer_) {
      const int c = base_.compare(a, b);
      if (c != 0)
        return c;
      return ca == cb ? 0 : (ca < cb ? 1 : -1);
    }
    const auto sa = static_cast<std::size_t>(ca), sb = static_cast<std::size_t>(cb);
    const int c = base_.compare(a * shift_[sa], b * shift_[sb]);
    if (c != 0)
      return c;
    if (base_comp_[sa] != base_comp_[sb])
      return base_comp_[sa] < base_comp_[sb] ? 1 : -1;
    const auto& x = chain_[sa];
    const auto& y = chain_[sb];
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
      if (x[i] != y[i])
        return x[i] < y[i] ? 1 : -1;
    return 0;
  }

private:
  MonomialOrder base_;
  std::vector<int> twists_;
  bool schreyer_ = false;
  std::vector<Monomial> shift_;
  std::vector<int> base_comp_;
  std::vector<std::vector<int>> chain_;
};

/// Arithmetic on free-module elements under a fixed ModuleOrder.
template <class F>
class ModuleArith {
public:
  using Scalar = typename F::Elem;
  using Vec = ModVec<F>;

  ModuleArith(const F& field, const ModuleOrder& order) : field_(&field), order_(&order) {}

  const F& field() const { return *field_; }
  const ModuleOrder& order() const { return *order_; }

  int cmp(const ModTerm<F>& a, const ModTerm<F>& b) const {
    return order_->compare(a.mono, a.comp, b.mono, b.comp);
  }

  Vec normalize(Vec v) const {
    std::sort(v.begin(), v.end(),
              [&](const ModTerm<F>& x, const ModTerm<F>& y) { return cmp(x, y) > 0; });
    Vec r;
    r.reserve(v.size());
    for (auto& t : v) {
      if (!r.empty() && r.back().comp == t.comp && r.back().mono == t.mono) {
        r.back().coef = field_->add(r.back().coef, t.coef);
      } else {
        if (!r.empty() && field_->is_zero(r.back().coef))
          r.pop_back();
        r.push_back(std::move(t));
      }
    }
    if (!r.empty() && field_->is_zero(r.back().coef))
      r.pop_back();
    return r;
  }

  // a[start..] - c * m * b
  Vec sub_mul(const Vec& a, std::size_t start, const Scalar& c, const Monomial& m,
              const Vec& b) const {
    Vec r;
    r.reserve(a.size() - start + b.size());
    std::size_t i = start, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size()) {
        r.push_back(a[i++]);
        continue;
      }
      ModTerm<F> bt{b[j].mono * m, b[j].comp, field_->mul(b[j].coef, c)};
      const int s = i == a.size() ? -1 : cmp(a[i], bt);
      if (s > 0) {
        r.push_back(a[i++]);
      } else if (s < 0) {
        bt.coef = field_->neg(bt.coef);
        r.push_back(std::move(bt));
        ++j;
      } else {
        auto v = field_->sub(a[i].coef, bt.coef);
        if (!field_->is_zero(v))
          r.push_back({a[i].mono, a[i].comp, std::move(v)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  Vec add(const Vec& a, const Vec& b) const {
    return sub_mul(a, 0, field_->neg(field_->one()), Monomial{}, b);
  }

  Vec scale(const Vec& a, const Scalar& c) const {
    if (field_->is_zero(c))
      return {};
    Vec r = a;
    for (auto& t : r)
      t.coef = field_->mul(t.coef, c);
    return r;
  }

  Vec mul_term(const Vec& a, const Monomial& m, const Scalar& c) const {
    Vec r;
    if (field_->is_zero(c))
      return r;
    r.reserve(a.size());
    for (const auto& t : a)
      r.push_back({t.mono * m, t.comp, field_->mul(t.coef, c)});
    return r;
  }

  // Degree of a homogeneous element (monomial degree plus twist).
  int degree(const Vec& v) const {
    return v.empty() ? -1 : v.front().mono.deg + order_->twist(v.front().comp);
  }

  bool is_homogeneous(const Vec& v) const {
    for (const auto& t : v)
      if (t.mono.deg + order_->twist(t.comp) != degree(v))
        return false;
    return true;
  }

private:
  const F* field_;
  const ModuleOrder* order_;
};

/// One step of a division: `coef * mono * basis[index]` was subtracted.
template <class F>
struct QuotientTerm {
  int index;
  Monomial mono;
  typename F::Elem coef;
};

/// Buchberger's algorithm for submodules of a graded free module, with normal
/// (lowest degree first) pair selection, the Gebauer-Moeller chain criteria and,
/// for rank-one modules, the coprime-leading-term criterion. Optionally tracks,
/// for each basis element, its expression in terms of the input generators.
template <class F>
class ModuleGroebner {
public:
  using Scalar = typename F::Elem;
  using Vec = ModVec<F>;

  ModuleGroebner(const F& field, const ModuleOrder& order, ComputeBudget budget = {})
      : field_(field), order_(order), arith_(field_, order_), budget_(budget) {}

  // When enabled, representations live in a free module with one basis vector
  // per input generator; `input_twists[j]` is the degree of generator j.
  void enable_tracking(std::vector<int> input_twists) {
    tracking_ = true;
    rep_order_ = ModuleOrder::term_over_position(order_.base(), std::move(input_twists));
  }

  std::vector<Vec> compute(const std::vector<Vec>& generators) {
    ModuleArith<F> rep_arith(field_, rep_order_);
    std::vector<std::size_t> order_idx(generators.size());
    for (std::size_t i = 0; i < generators.size(); ++i)
      order_idx[i] = i;
    std::stable_sort(order_idx.begin(), order_idx.end(), [&](std::size_t a, std::size_t b) {
      return arith_.degree(generators[a]) < arith_.degree(generators[b]);
    });
    std::size_t next_gen = 0;

    while (true) {
      budget_.check_time();
      const int gen_deg = next_gen < order_idx.size()
                              ? arith_.degree(generators[order_idx[next_gen]])
                              : INT_MAX;
      const int pair_deg = pairs_.empty() ? INT_MAX : pairs_.top().degree;
      if (gen_deg == INT_MAX && pair_deg == INT_MAX)
        break;
      Vec v;
      Vec rep;
      if (gen_deg <= pair_deg) {
        const std::size_t g = order_idx[next_gen++];
        v = generators[g];
        if (v.empty())
          continue;
        budget_.check_degree(gen_deg);
        if (tracking_)
          rep = {ModTerm<F>{Monomial{}, static_cast<int>(g), field_.one()}};
      } else {
        Pair p = pairs_.top();
        pairs_.pop();
        budget_.check_degree(p.degree);
        s_vector(p.i, p.j, v, rep, rep_arith);
      }
      top_reduce(v, rep, rep_arith);
      if (v.empty())
        continue;
      const Scalar inv = field_.inv(v.front().coef);
      v = arith_.scale(v, inv);
      if (tracking_)
        rep = rep_arith.scale(rep, inv);
      insert(std::move(v), std::move(rep));
    }
    return finalize(rep_arith);
  }

  // Representations of the returned basis elements (only with tracking).
  const std::vector<Vec>& representations() const { return final_reps_; }

private:
  struct Element {
    Vec vec;
    Vec rep;
    Monomial lm;
    int comp;
  };
  struct Pair {
    int i, j;
    int degree;
    Monomial lcm;
  };
  struct PairCmp {
    const MonomialOrder* base;
    bool operator()(const Pair& a, const Pair& b) const {
      if (a.degree != b.degree)
        return a.degree > b.degree;
      const int c = base->compare(a.lcm, b.lcm);
      if (c != 0)
        return c > 0;
      if (a.j != b.j)
        return a.j > b.j;
      return a.i > b.i;
    }
  };

  int find_divisor(const Monomial& m, int comp) const {
    if (static_cast<std::size_t>(comp) >= by_comp_.size())
      return -1;
    for (int idx : by_comp_[static_cast<std::size_t>(comp)])
      if (divides(basis_[static_cast<std::size_t>(idx)].lm, m))
        return idx;
    return -1;
  }

  void top_reduce(Vec& v, Vec& rep, const ModuleArith<F>& rep_arith) const {
    while (!v.empty()) {
      const int d = find_divisor(v.front().mono, v.front().comp);
      if (d < 0)
        return;
      const Element& e = basis_[static_cast<std::size_t>(d)];
      const Monomial q = v.front().mono / e.lm;
      const Scalar c = v.front().coef;  // basis elements are monic
      v = arith_.sub_mul(v, 0, c, q, e.vec);
      if (tracking_)
        rep = rep_arith.sub_mul(rep, 0, c, q, e.rep);
    }
  }

  void s_vector(int i, int j, Vec& v, Vec& rep, const ModuleArith<F>& rep_arith) const {
    const Element& a = basis_[static_cast<std::size_t>(i)];
    const Element& b = basis_[static_cast<std::size_t>(j)];
    const Monomial l = lcm(a.lm, b.lm);
    v = arith_.sub_mul(arith_.mul_term(a.vec, l / a.lm, field_.one()), 0, field_.one(),
                       l / b.lm, b.vec);
    if (tracking_)
      rep = rep_arith.sub_mul(rep_arith.mul_term(a.rep, l / a.lm, field_.one()), 0,
                              field_.one(), l / b.lm, b.rep);
  }

  void insert(Vec v, Vec rep) {
    const int t = static_cast<int>(basis_.size());
    Element e{std::move(v), std::move(rep), Monomial{}, 0};
    e.lm = e.vec.front().mono;
    e.comp = e.vec.front().comp;
    const bool rank_one = order_.rank() == 1;

    // Chain criterion on existing pairs.
    std::vector<Pair> kept;
    while (!pairs_.empty()) {
      Pair p = pairs_.top();
      pairs_.pop();
      const Element& a = basis_[static_cast<std::size_t>(p.i)];
      const Element& b = basis_[static_cast<std::size_t>(p.j)];
      if (a.comp == e.comp && divides(e.lm, p.lcm) && lcm(a.lm, e.lm) != p.lcm &&
          lcm(b.lm, e.lm) != p.lcm)
        continue;
      kept.push_back(p);
    }
    for (auto& p : kept)
      pairs_.push(p);

    struct Cand {
      int i;
      Monomial lcm;
      bool coprime;
      bool dead = false;
    };
    std::vector<Cand> cands;
    for (int i = 0; i < t; ++i) {
      const Element& a = basis_[static_cast<std::size_t>(i)];
      if (a.comp != e.comp)
        continue;
      cands.push_back({i, lcm(a.lm, e.lm), rank_one && coprime(a.lm, e.lm)});
    }
    // Drop candidates whose lcm is a proper multiple of another candidate's.
    for (auto& c : cands)
      for (const auto& d : cands)
        if (&c != &d && d.lcm != c.lcm && divides(d.lcm, c.lcm)) {
          c.dead = true;
          break;
        }
    // Among equal lcms keep one; drop the whole group if any member is coprime.
    for (std::size_t x = 0; x < cands.size(); ++x) {
      if (cands[x].dead)
        continue;
      bool group_coprime = cands[x].coprime;
      for (std::size_t y = x + 1; y < cands.size(); ++y)
        if (!cands[y].dead && cands[y].lcm == cands[x].lcm) {
          group_coprime = group_coprime || cands[y].coprime;
          cands[y].dead = true;
        }
      if (group_coprime)
        cands[x].dead = true;
    }
    for (const auto& c : cands)
      if (!c.dead)
        pairs_.push({c.i, t, c.lcm.deg + order_.twist(e.comp), c.lcm});

    if (static_cast<std::size_t>(e.comp) >= by_comp_.size())
      by_comp_.resize(static_cast<std::size_t>(e.comp) + 1);
    by_comp_[static_cast<std::size_t>(e.comp)].push_back(t);
    basis_.push_back(std::move(e));
  }

  std::vector<Vec> finalize(const ModuleArith<F>& rep_arith) {
    // Minimal basis: drop elements whose leading term is divisible by another's.
    std::vector<int> keep;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < basis_.size() && !redundant; ++j) {
        if (i == j || basis_[i].comp != basis_[j].comp)
          continue;
        if (divides(basis_[j].lm, basis_[i].lm) && (basis_[j].lm != basis_[i].lm || j < i))
          redundant = true;
      }
      if (!redundant)
        keep.push_back(static_cast<int>(i));
    }
    std::vector<Element> minimal;
    for (int i : keep)
      minimal.push_back(basis_[static_cast<std::size_t>(i)]);
    // Tail-reduce every element against the others.
    std::vector<Vec> out;
    final_reps_.clear();
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      Vec v = minimal[i].vec;
      Vec rep = minimal[i].rep;
      std::size_t pos = 1;
      while (pos < v.size()) {
        budget_.check_time();
        int d = -1;
        for (std::size_t j = 0; j < minimal.size(); ++j)
          if (j != i && minimal[j].comp == v[pos].comp && divides(minimal[j].lm, v[pos].mono)) {
            d = static_cast<int>(j);
            break;
          }
        if (d < 0) {
          ++pos;
          continue;
        }
        const Element& e = minimal[static_cast<std::size_t>(d)];
        const Monomial q = v[pos].mono / e.lm;
        const Scalar c = v[pos].coef;
        Vec head(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(pos));
        Vec tail = arith_.sub_mul(v, pos, c, q, e.vec);
        head.insert(head.end(), tail.begin(), tail.end());
        v = std::move(head);
        if (tracking_)
          rep = rep_arith.sub_mul(rep, 0, c, q, e.rep);
      }
      out.push_back(std::move(v));
      final_reps_.push_back(std::move(rep));
    }
    // Deterministic output: sort by leading term, largest first.
    std::vector<std::size_t> perm(out.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
      perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return arith_.cmp(out[a].front(), out[b].front()) > 0;
    });
    std::vector<Vec> sorted;
    std::vector<Vec> sorted_reps;
    for (auto p : perm) {
      sorted.push_back(std::move(out[p]));
      sorted_reps.push_back(std::move(final_reps_[p]));
    }
    final_reps_ = std::move(sorted_reps);
    return sorted;
  }

  F field_;
  ModuleOrder order_;
  ModuleArith<F> arith_;
  ComputeBudget budget_;
  bool tracking_ = false;
  ModuleOrder rep_order_;
  std::vector<Element> basis_;
  std::vector<std::vector<int>> by_comp_;
  std::priority_queue<Pair, std::vector<Pair>, PairCmp> pairs_{PairCmp{&order_.base()}};
  std::vector<Vec> final_reps_;
};

/// Full normal form of `v` with respect to a (monic-led) basis; optionally
/// records the division quotients.
template <class F>
ModVec<F> module_normal_form(const ModuleArith<F>& arith, ModVec<F> v,
                             const std::vector<ModVec<F>>& basis,
                             std::vector<QuotientTerm<F>>* quotients = nullptr) {
  const F& field = arith.field();
  ModVec<F> rem;
  std::size_t pos = 0;
  while (pos < v.size()) {
    int d = -1;
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (!basis[j].empty() && basis[j].front().comp == v[pos].comp &&
          divides(basis[j].front().mono, v[pos].mono)) {
        d = static_cast<int>(j);
        break;
      }
    if (d < 0) {
      rem.push_back(v[pos++]);
      continue;
    }
    const auto& b = basis[static_cast<std::size_t>(d)];
    const Monomial q = v[pos].mono / b.front().mono;
    const auto c = field.div(v[pos].coef, b.front().coef);
    if (quotients)
      quotients->push_back({d, q, c});
    v = arith.sub_mul(v, pos, c, q, b);
    pos = 0;
  }
  return rem;
}

} // namespace embvan
