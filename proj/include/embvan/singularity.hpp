#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "embvan/catalog.hpp"

namespace embvan {

/// Numerical class hH - e_1 E_1 - e_2 E_2 - ... on a blow-up, stored with the
/// signs included: `e[j-1]` is the coefficient of E_j. One exceptional
/// divisor is the common case and E is E_1.
struct DivisorClass {
  mpq_class h = 0;
  std::vector<mpq_class> e;

  DivisorClass() = default;
  DivisorClass(mpq_class h_coef, mpq_class e_coef);
  DivisorClass(mpq_class h_coef, std::vector<mpq_class> e_coefs);

  mpq_class e_coef(int j = 1) const;

  DivisorClass operator+(const DivisorClass& o) const;
  DivisorClass operator-(const DivisorClass& o) const;
  DivisorClass operator*(const mpq_class& s) const;
  bool operator==(const DivisorClass& o) const;

  std::string to_string() const;
  nlohmann::json to_json() const;
};

/// K_X = -(n+1)H + (r-1)E for the blow-up of P^n along a smooth codimension-r centre.
DivisorClass canonical_class(int n, int r);

/// B_i = iH - (i-1)E_1 - (i-2)E_2 - ... - E_{i-1}.
DivisorClass linear_series_class(int i);

enum class Singularity { Klt, Plt, Lc, NotLc };

std::string to_string(Singularity s);
bool is_lc(Singularity s);

/// n_i for 2 <= i <= top, where top = k (generic, symmetric) or floor(k/2) (skew).
struct MultiplicityVector {
  std::vector<int> n;  // n[i - 2] = n_i

  int top() const { return static_cast<int>(n.size()) + 1; }
  int at(int i) const;
  int count() const;           // sum of n_i
  int weighted(int shift) const;  // sum of (i - shift) n_i

  nlohmann::json to_json() const;
  bool operator==(const MultiplicityVector&) const = default;
};

/// Throws std::invalid_argument when nv violates the constraints of its case:
/// wrong length, a negative entry, or n_top > 1 at the square / even boundary.
void check_multiplicities(const EmbeddingCase& c, const MultiplicityVector& nv);

struct DiscrepancyReport {
  EmbeddingCase embedding;
  MultiplicityVector multiplicities;
  mpq_class scale = 1;  // every strict transform enters F with this coefficient
  int n = 0;
  int r = 0;
  // Discrepancy at E_j over the exceptional range of the blow-up tower.
  std::vector<std::pair<int, mpq_class>> exceptional;
  // Skew case only: the formula evaluated at j = floor(k/2), reported separately.
  std::optional<std::pair<int, mpq_class>> boundary;
  // Discrepancy of each strict transform present, -scale; absent when F = 0.
  std::optional<mpq_class> strict_transform;
  Singularity verdict = Singularity::Klt;
  DivisorClass F;
  std::optional<int> e_bound;  // sum i n_i - n when sum (i-1) n_i = r

  mpq_class min_discrepancy() const;
  nlohmann::json to_json() const;
};

/// Discrepancies of the pair (X, F) where F is the sum of strict transforms of
/// general combinations of size-i minors (sub-Pfaffians), n_i of each size.
DiscrepancyReport discrepancy_vector(const EmbeddingCase& c, const MultiplicityVector& nv);

/// Same with every component of F weighted by `scale` in (0, 1].
DiscrepancyReport weighted_discrepancy_vector(const EmbeddingCase& c, const MultiplicityVector& nv,
                                              const mpq_class& scale);

struct OptimizerResult {
  MultiplicityVector multiplicities;
  DiscrepancyReport report;
  long long candidates = 0;  // vectors visited by the search
};

/// Among vectors meeting the case constraints with sum (i-1) n_i = r and an
/// lc verdict, one minimizing sum i n_i - n; ties go to the lexicographically
/// largest (n_top, ..., n_2).
OptimizerResult optimize_multiplicities(const EmbeddingCase& c);

/// The closed-form optimal vector: n_k = m-k+1 and n_i = 2 (generic), all
/// n_i = 1 (symmetric), n_l = 1 or 3 by parity of k and n_i = 4 (skew).
MultiplicityVector closed_form_multiplicities(const EmbeddingCase& c);

/// d_1 + ... + d_r - n for generator degrees sorted descending.
int degree_sum_bound(const std::vector<int>& degrees, int n, int r);

/// The bound e from an lc class F = (e+n)H - rE.
int compose_bound(const DivisorClass& F, int n, int r, Singularity verdict);

/// lc iff m_j <= c_j for all j, plt iff every inequality is strict.
Singularity lc_multiplicity_criterion(const std::vector<int>& multiplicities,
                                      const std::vector<int>& codims);

} // namespace embvan
