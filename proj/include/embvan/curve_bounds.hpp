#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "embvan/singularity.hpp"

namespace embvan {

/// A curve of genus g embedded by |K_C + D| with deg D = d >= 3, in P^n with
/// n = d + g - 2.
struct CurveSetup {
  int g = 0;
  int d = 3;

  CurveSetup(int genus, int degree);
  int n() const { return d + g - 2; }
  int codim() const { return n() - 1; }
  int embedding_degree() const { return d + 2 * g - 2; }
};

enum class CurveClassVariant { A, B, C };

CurveClassVariant parse_curve_variant(const std::string& s);

/// Numerical classes of the log canonical divisors available on the blow-up:
/// (a) (d-1)H - (d-3)E, (b) dH - (d-2)E for g > 0, and
/// (c) ((d+g-5)/(d-4)) (dH - (d-2)E) for g > 0 and d > 4.
DivisorClass curve_lc_class(int g, int d, CurveClassVariant v);

/// For g in {0, 1} and d >= 4: checks that the lc class equals
/// (n+1)H - (n-1)E and returns the composed bound e = 1.
int low_genus_bound(int g, int d);

/// Largest useful epsilon': (d+g-5)/(d-4).
mpq_class epsilon_cap(int g, int d);

struct CurveVanishingQuery {
  int g = 0;
  int d = 5;
  int k = 1;
  int p = 0;
  mpq_class eps = 0;  // epsilon' in (0, epsilon_cap]
};

struct ConditionsReport {
  // (i)  p + d eps >= 2 (k - 1 + (d-2) eps)
  // (ii) k - 1 + (d-2) eps >= (2g-2)/(d-4)
  mpq_class lhs_i, rhs_i, lhs_ii, rhs_ii;
  bool holds_i = false, strict_i = false;
  bool holds_ii = false, strict_ii = false;
  bool sufficient = false;  // both hold and at least one strictly

  nlohmann::json to_json() const;
};

/// Evaluates the nef-and-big conditions on A exactly. Requires d > 4 and
/// eps in (0, epsilon_cap].
ConditionsReport conditions_check(const CurveVanishingQuery& q);

/// Whether some admissible eps makes the conditions sufficient at (k, p).
/// Both conditions are affine in eps: (i) is equivalent to
/// eps <= (p - 2k + 2)/(d - 4) and (ii) improves as eps grows, so the only
/// candidate worth testing is the largest admissible eps satisfying (i).
bool conditions_satisfiable(int g, int d, int k, int p);

/// Smallest integer d > (2g+8)/3, and at least 5.
int degree_threshold(int g);

struct ExceptionRow {
  int k;
  int p_min;  // 2k - 1
  int p_max;  // largest failing twist
};

struct ExceptionRegion {
  int g = 0;
  int d = 5;
  std::vector<std::pair<int, int>> cells;  // (k, p) pairs left uncovered
  std::vector<ExceptionRow> rows;

  bool empty() const { return cells.empty(); }
  bool contains(int k, int p) const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// (k, p) with k >= 3 and p >= 2k - 1 where no admissible eps certifies
/// vanishing. k = 1 is covered by projective normality and k = 2 by the
/// quadratic-power vanishing for d >= 5; genus 0 and 1 are covered by the
/// low-genus bound. Requires d >= 5.
ExceptionRegion exception_region(int g, int d);

} // namespace embvan
