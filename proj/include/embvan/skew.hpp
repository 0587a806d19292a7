#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "embvan/field.hpp"
#include "embvan/matrix.hpp"

namespace embvan {

/// Truncated power series k[t]/(t^T), the working model of a discrete
/// valuation ring. Elements are coefficient vectors of length T.
class SeriesRing {
public:
  using Elem = std::vector<PrimeField::Elem>;

  SeriesRing(PrimeField field, int precision);

  const PrimeField& field() const { return field_; }
  int precision() const { return T_; }

  Elem zero() const { return Elem(static_cast<std::size_t>(T_), 0); }
  Elem one() const { return constant(1); }
  Elem constant(PrimeField::Elem c) const;
  Elem monomial(PrimeField::Elem c, int power) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, PrimeField::Elem c) const;
  bool is_zero(const Elem& a) const;

  /// Order of vanishing at t = 0; the precision T for the zero series.
  int valuation(const Elem& a) const;
  /// a / t^v, padding the top coefficients with zeros.
  Elem shift_down(const Elem& a, int v) const;
  /// Drops every coefficient of t^j for j >= keep.
  Elem truncate(const Elem& a, int keep) const;

private:
  PrimeField field_;
  int T_;
};

/// Raised when a computation needs more powers of t than were carried.
class ImprecisionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Skew 2-form alpha = sum_{i<j} a_ij x_i ^ x_j over k[t]/(t^T) on V = k^N.
/// `entries` is the full N x N matrix (lower triangle negated, zero diagonal).
struct SkewFamily {
  PrimeField field;
  int dim = 0;
  int precision = 0;
  Mat<SeriesRing> entries;

  SeriesRing ring() const { return SeriesRing(field, precision); }

  /// Zero family with precision 2N by default.
  static SkewFamily zero(const PrimeField& field, int dim, int precision = 0);
  /// Adds c t^power (x_i ^ x_j), i != j.
  void add_term(int i, int j, std::int64_t c, int power);

  /// Checks shape, skew symmetry at every coefficient and a nonzero special fibre.
  void validate() const;
  /// Rank over the fraction field, computed at the carried precision.
  int generic_rank() const;
  int l() const { return generic_rank() / 2; }

  /// {"dimension", "field", "precision", "entries": [{"i", "j", "t": [c0, c1, ...]}]}
  /// listing the strict upper triangle; indices are 0-based.
  nlohmann::json to_json() const;
  static SkewFamily from_json(const nlohmann::json& j);
};

/// Coefficients of an element of the exterior power ^{2r} V*, on the basis
/// x_S for 2r-subsets S in lexicographic order.
using ExteriorVector = std::vector<PrimeField::Elem>;

/// Scales a nonzero vector so that its first nonzero entry is 1.
ExteriorVector normalize_projective(const PrimeField& field, ExteriorVector v);

/// Divided power alpha^(r) = alpha^r / r! of a constant skew form; its
/// coefficients are the principal 2r x 2r sub-Pfaffians.
ExteriorVector divided_power(const PrimeField& field, const Mat<PrimeField>& form, int r);

struct WedgeLimit {
  int r = 0;
  int valuation = 0;    // d_r
  ExteriorVector limit;  // leading coefficients, normalized
};

/// Valuation and leading term of the divided power alpha^(r) of a family.
WedgeLimit wedge_power_limit(const SkewFamily& fam, int r);

/// One step of the normal form: a subspace W (rows of an RREF basis in the
/// coordinates of V) with the residual form on it, written in that basis and
/// scaled so its first nonzero upper-triangular entry is 1.
struct SkewLevel {
  std::vector<std::vector<PrimeField::Elem>> basis;
  Mat<PrimeField> form;
  int rank = 0;
  int valuation = 0;  // power of t removed before this residue was taken

  bool operator==(const SkewLevel& o) const {
    return basis == o.basis && form == o.form && rank == o.rank;
  }
};

/// The flag-and-forms data: level 0 lives on V itself, level i on the
/// kernel W_i of the form at level i-1. The ranks add up to 2l.
struct SkewNormalData {
  PrimeField field;
  int dim = 0;
  int l = 0;
  std::vector<SkewLevel> levels;

  std::vector<int> ranks() const;
  /// The proper subspaces W_1 ⊃ W_2 ⊃ ... carrying the forms after the first.
  std::vector<std::vector<std::vector<PrimeField::Elem>>> flag() const;

  bool operator==(const SkewNormalData& o) const {
    return field == o.field && dim == o.dim && l == o.l && levels == o.levels;
  }
  nlohmann::json to_json() const;
};

/// Repeatedly takes the residue at t = 0, splits off its nondegenerate part
/// and passes to the residual form on the kernel, divided by the largest
/// power of t. The residual form is the Schur complement over k[t]/(t^T), i.e.
/// the restriction to the alpha-orthogonal of a complement of the kernel.
SkewNormalData extract_normal_data(const SkewFamily& fam);

/// A lift of the level-i form to ^2 V*: extension by zero along the standard
/// coordinate complement of W_i.
Mat<PrimeField> canonical_lift(const SkewNormalData& data, int level);

/// canonical_lift plus a random element of W_i^perp ^ V*, which every lift
/// differs from the canonical one by.
Mat<PrimeField> random_lift(const SkewNormalData& data, int level, std::uint64_t seed);

/// The lift vanishing on the complements C_0, ..., C_{i-1} chosen by
/// extraction (standard coordinates off the pivots of each kernel), so that
/// the flag splits the smoothed family block by block.
Mat<PrimeField> adapted_lift(const SkewNormalData& data, int level);

/// omega_r: r factors in total, up to r_1 copies of alpha_0, then up to r_2
/// copies of the lift of alpha_1, and so on, normalized. Uses the canonical
/// lifts, or seeded random lifts when `seed` is nonzero.
ExteriorVector build_omega(const SkewNormalData& data, int r, std::uint64_t seed = 0);

/// alpha = sum_i lambda_i t^i adapted_lift_i with seeded nonzero lambda_i,
/// plus seeded forms on the annihilator of W_1 at positive powers of t.
/// extract_normal_data recovers the data exactly and the generic rank is 2l.
SkewFamily smoothing(const SkewNormalData& data, std::uint64_t seed, int precision = 0);

/// Every normal datum on F^N (flags with forms modulo scalars), for small
/// fields and dimensions.
std::vector<SkewNormalData> enumerate_normal_data(const PrimeField& field, int dim);

} // namespace embvan
