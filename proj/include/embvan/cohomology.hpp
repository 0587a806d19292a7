#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "embvan/ideal.hpp"
#include "embvan/resolution.hpp"

namespace embvan {

/// dim H^i(P^n, O(p)) in closed form.
long long line_bundle_cohomology(int n, int p, int i);

/// C(x + m, m) as a polynomial in x, evaluated at any integer x.
mpz_class binomial_polynomial(long long x, int m);

/// Sheaf and local cohomology of a graded module M over S = k[x_0..x_n],
/// from a minimal free resolution, via graded local duality:
/// H^j_m(M)_p is dual to Ext^{N-j}(M, S(-N))_{-p}, N = n + 1, and the Ext
/// groups are homology of the dual complex ⊕_t S(a_{q,t} - N).
template <class F>
class ModuleCohomology {
public:
  ModuleCohomology(PolyRing<F> ring, FreeResolution<F> res)
      : ring_(std::move(ring)), res_(std::move(res)) {
    if (res_.length() > ring_.nvars())
      throw std::logic_error("resolution longer than the number of variables");
  }

  int nvars() const { return ring_.nvars(); }
  int dimension() const { return ring_.nvars() - 1; }
  const FreeResolution<F>& resolution() const { return res_; }

  long long hilbert_function(int p) const {
    return hilbert_function_from_resolution(res_, nvars(), p);
  }

  mpz_class hilbert_polynomial(int p) const {
    mpz_class sum = 0;
    for (std::size_t q = 0; q < res_.twists.size(); ++q)
      for (int a : res_.twists[q]) {
        const mpz_class v = binomial_polynomial(static_cast<long long>(p) - a, nvars() - 1);
        if (q % 2 == 0)
          sum += v;
        else
          sum -= v;
      }
    return sum;
  }

  /// dim H^j_m(M)_p for 0 <= j <= N.
  long long local_cohomology(int j, int p) {
    if (j < 0 || j > nvars())
      throw std::out_of_range("local cohomology index out of range");
    return ext_dim(nvars() - j, -p);
  }

  /// dim H^i(P^n, M~(p)) for 0 <= i <= n.
  long long sheaf_cohomology(int i, int p) {
    if (i < 0 || i > dimension())
      throw std::out_of_range("cohomological index out of range");
    if (i >= 1)
      return local_cohomology(i + 1, p);
    return hilbert_function(p) - local_cohomology(0, p) + local_cohomology(1, p);
  }

  // dim Ext^q(M, S(-N)) in degree `deg`.
  long long ext_dim(int q, int deg) {
    const long long c = piece_dim(q, deg);
    if (c == 0)
      return 0;
    return c - rank_dual(q + 1, deg) - rank_dual(q, deg);
  }

private:
  // dim of C_q in degree deg: ⊕_t S_{a_{q,t} - N + deg}.
  long long piece_dim(int q, int deg) const {
    if (q < 0 || q > res_.length())
      return 0;
    mpz_class s = 0;
    for (int a : res_.twists[static_cast<std::size_t>(q)])
      s += ring_piece_dim(nvars(), a - nvars() + deg);
    return s.get_si();
  }

  // Rank of the dual differential C_{q-1} -> C_q in degree deg, i.e. the
  // transpose of maps[q-1] : F_q -> F_{q-1} acting on polynomial vectors.
  long long rank_dual(int q, int deg) {
    if (q < 1 || q > res_.length())
      return 0;
    const auto key = std::make_pair(q, deg);
    if (auto it = rank_cache_.find(key); it != rank_cache_.end())
      return it->second;
    const int N = nvars();
    const auto& dmap = res_.maps[static_cast<std::size_t>(q - 1)];
    const auto& src = res_.twists[static_cast<std::size_t>(q - 1)];
    const auto& tgt = res_.twists[static_cast<std::size_t>(q)];
    // Row-major view of the differential: entries of row s.
    std::vector<std::vector<std::pair<int, const Polynomial<F>*>>> by_row(src.size());
    for (int t = 0; t < dmap.ncols(); ++t)
      for (const auto& [s, p] : dmap.cols[static_cast<std::size_t>(t)])
        by_row[static_cast<std::size_t>(s)].emplace_back(t, &p);

    std::vector<std::unordered_map<Monomial, int, MonomialHash>> index(tgt.size());
    std::vector<int> offset(tgt.size() + 1, 0);
    for (std::size_t t = 0; t < tgt.size(); ++t) {
      const auto monos = monomials_of_degree(N, tgt[t] - N + deg);
      for (std::size_t i = 0; i < monos.size(); ++i)
        index[t].emplace(monos[i], static_cast<int>(i));
      offset[t + 1] = offset[t] + static_cast<int>(monos.size());
    }
    std::vector<SparseRow<F>> rows;
    for (std::size_t s = 0; s < src.size(); ++s) {
      const int e = src[s] - N + deg;
      if (e < 0 || by_row[s].empty())
        continue;
      for (const auto& mu : monomials_of_degree(N, e)) {
        SparseRow<F> row;
        for (const auto& [t, p] : by_row[s])
          for (const auto& term : p->terms) {
            const int col = offset[static_cast<std::size_t>(t)] +
                            index[static_cast<std::size_t>(t)].at(term.mono * mu);
            row.emplace_back(col, term.coef);
          }
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        rows.push_back(std::move(row));
      }
    }
    const long long r = sparse_rank(ring_.field(), std::move(rows));
    rank_cache_.emplace(key, r);
    return r;
  }

  PolyRing<F> ring_;
  FreeResolution<F> res_;
  std::map<std::pair<int, int>, long long> rank_cache_;
};

/// Cohomology of the sheaf associated to a graded module presented as a cokernel.
template <class F>
long long sheaf_cohomology(const PolyRing<F>& ring, const GradedModulePresentation<F>& M, int i,
                           int p) {
  ModuleCohomology<F> mc(ring, free_resolution(ring, M));
  return mc.sheaf_cohomology(i, p);
}

/// Cohomology of the ideal sheaf itself (the module I, not S/I).
template <class F>
long long ideal_sheaf_cohomology(const GradedIdeal<F>& I, int i, int p) {
  ModuleCohomology<F> mc(I.ring(), resolve_ideal(I));
  return mc.sheaf_cohomology(i, p);
}

enum class Verdict { Pass, Fail, Incomplete };

std::string to_string(Verdict v);
int exit_code(Verdict v);
Verdict combine(Verdict a, Verdict b);

struct ScanOptions {
  double seconds_per_power = 120.0;  // wall-time cap for each power k
  int max_degree = 40;               // degree cap inside Groebner/resolution steps
};

struct CohomologyCell {
  int k;
  int p;
  std::vector<long long> h;  // h[i] = dim H^i(P^n, I^k(p)), i = 0..n
  long long hilbert_polynomial;
  bool euler_ok;
};

struct PowerStatus {
  int k;
  bool complete;
  std::string note;
  int p_lo, p_hi;
  std::vector<int> total_betti;
};

/// Map (i, k, p) -> dim H^i(P^n, I_Y^k(p)) over a recorded probe window.
struct CohomologyTable {
  std::string label;
  std::string field;
  int n = 0;
  int e = 0;
  int d_Y = 0;
  int k_max = 0;
  int pad = 0;
  std::vector<CohomologyCell> cells;
  std::vector<PowerStatus> powers;

  std::optional<long long> get(int i, int k, int p) const;
  int threshold(int k) const { return e + (k - 1) * d_Y; }
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct ScanResult {
  CohomologyTable table;
  Verdict verdict = Verdict::Pass;
  // (i, k, p) with p at or above the threshold and nonzero H^i, i > 0.
  std::vector<std::tuple<int, int, int>> violations;
  // (i, k, p) below the threshold with nonzero H^i, i > 0 (tightness evidence).
  std::vector<std::tuple<int, int, int>> below_threshold_nonvanishing;
  bool euler_consistent = true;

  nlohmann::json to_json() const;
};

inline const char* kThresholdFormula = "H^i(P^n, I^k(p)) = 0 for all i > 0 and p >= e + (k-1)*d_Y";

/// For each 1 <= k <= k_max computes H^i(P^n, I^k(p)) for every i and every p
/// within `pad` of e + (k-1) d_Y. A power whose computation hits a resource
/// cap is recorded as incomplete.
template <class F>
ScanResult vanishing_scan(const GradedIdeal<F>& I, int d_Y, int e, int k_max, int pad,
                          const ScanOptions& opts = {}, const std::string& label = "") {
  if (k_max < 1)
    throw std::invalid_argument("vanishing_scan: k_max must be at least 1");
  if (pad < 0)
    throw std::invalid_argument("vanishing_scan: pad must be nonnegative");
  ScanResult out;
  auto& tab = out.table;
  tab.label = label;
  tab.field = I.ring().field().name();
  tab.n = I.nvars() - 1;
  tab.e = e;
  tab.d_Y = d_Y;
  tab.k_max = k_max;
  tab.pad = pad;
  for (int k = 1; k <= k_max; ++k) {
    const int thr = tab.threshold(k);
    PowerStatus st{k, true, "", thr - pad, thr + pad, {}};
    try {
      const auto budget = ComputeBudget::with(opts.seconds_per_power, opts.max_degree);
      auto Ik = ideal_power(I, k);
      ModuleCohomology<F> mc(I.ring(), resolve_ideal(Ik, budget));
      st.total_betti = mc.resolution().total_betti();
      std::vector<CohomologyCell> cells;
      for (int p = st.p_lo; p <= st.p_hi; ++p) {
        budget.check_time();
        CohomologyCell cell{k, p, {}, 0, true};
        long long chi = 0;
        for (int i = 0; i <= tab.n; ++i) {
          cell.h.push_back(mc.sheaf_cohomology(i, p));
          chi += (i % 2 ? -1 : 1) * cell.h.back();
        }
        const mpz_class hp = mc.hilbert_polynomial(p);
        cell.hilbert_polynomial = hp.get_si();
        cell.euler_ok = hp == mpz_class(std::to_string(chi));
        cells.push_back(std::move(cell));
      }
      for (auto& c : cells) {
        out.euler_consistent = out.euler_consistent && c.euler_ok;
        for (int i = 1; i <= tab.n; ++i) {
          if (c.h[static_cast<std::size_t>(i)] == 0)
            continue;
          if (c.p >= thr)
            out.violations.emplace_back(i, k, c.p);
          else
            out.below_threshold_nonvanishing.emplace_back(i, k, c.p);
        }
        tab.cells.push_back(std::move(c));
      }
    } catch (const ResourceLimitExceeded& ex) {
      st.complete = false;
      st.note = ex.what();
    }
    tab.powers.push_back(std::move(st));
  }
  Verdict v = Verdict::Pass;
  for (const auto& st : tab.powers)
    if (!st.complete)
      v = Verdict::Incomplete;
  if (!out.violations.empty() || !out.euler_consistent)
    v = Verdict::Fail;
  out.verdict = v;
  return out;
}

} // namespace embvan
