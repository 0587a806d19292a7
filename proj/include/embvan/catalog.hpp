#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embvan/ideal.hpp"
#include "embvan/matrix.hpp"

namespace embvan {

enum class CaseKind { Generic, Symmetric, Skew };

/// A universal determinantal embedding: rank-one k x m matrices, rank-one
/// symmetric k x k matrices, or rank-two skew k x k matrices.
struct EmbeddingCase {
  CaseKind kind = CaseKind::Generic;
  int k = 2;
  int m = 2;  // columns; equals k unless generic

  static EmbeddingCase generic(int k, int m);
  static EmbeddingCase symmetric(int k);
  static EmbeddingCase skew(int k);
  // Accepts "generic:KxM", "symmetric:K", "skew:K".
  static EmbeddingCase parse(const std::string& spec);

  void validate() const;
  int nvars() const;
  int n() const { return nvars() - 1; }
  int r() const;
  int d_Y() const { return 2; }
  // Largest degeneracy index: k for generic and symmetric, floor(k/2) for skew.
  int max_index() const;
  std::string name() const;
  // Catalog label of the same variety (segre:KxM, veronese:K, pluecker:K).
  std::string label() const;
};

/// Codimension of the degeneracy locus Delta_i in P^n.
int codim_delta(const EmbeddingCase& c, int i);

/// Index of the coordinate holding matrix entry (i, j); for symmetric and skew
/// cases only the upper triangle (i <= j, resp. i < j) carries coordinates.
int coordinate_index(const EmbeddingCase& c, int i, int j);

/// The universal matrix of linear forms (skew: lower triangle negated).
Mat<RingGF> universal_matrix(const EmbeddingCase& c, const RingGF& ring);

/// The matrix at a point given by its coordinates.
Mat<PrimeField> matrix_at(const EmbeddingCase& c, const PrimeField& field,
                          std::span<const PrimeField::Elem> coords);

struct VarietySpec {
  std::string label;
  int n = 0;
  GradedIdeal<PrimeField> ideal;
  int codim = 0;
  int d_Y = 2;
  std::optional<int> curve_degree;
  std::optional<int> genus;
  std::optional<EmbeddingCase> embedding;
  std::uint64_t seed = 0;  // seed actually used by randomized constructors
  int attempts = 1;
};

VarietySpec build_determinantal(const EmbeddingCase& c, const PrimeField& field = PrimeField());

/// Ideal of Delta_i: i x i minors (generic, symmetric) or principal 2i x 2i
/// sub-Pfaffians (skew) of the universal matrix.
GradedIdeal<PrimeField> build_degeneracy_locus(const EmbeddingCase& c, int i,
                                               const PrimeField& field = PrimeField());

VarietySpec build_rational_normal_curve(int m, const PrimeField& field = PrimeField());

/// Genus-one curves: target 4 is the complete intersection of two quadrics in
/// P^3; target 5 is cut out by the 4x4 Pfaffians of a 5x5 skew matrix of
/// linear forms in P^4. Random choices are reseeded until the curve is
/// certified smooth of the right degree.
VarietySpec build_elliptic_curve(int degree, std::uint64_t seed,
                                 const PrimeField& field = PrimeField(), int max_attempts = 20);

/// genus 0: rational normal curve of degree `target`; genus 1: elliptic curve
/// of degree `target` (4 or 5).
VarietySpec build_curve(int genus, int target, std::uint64_t seed = 1,
                        const PrimeField& field = PrimeField());

/// Labels: segre:KxM, veronese:K, pluecker:K, rnc:M, elliptic:4, elliptic:5.
VarietySpec from_label(const std::string& label, std::uint64_t seed = 1,
                       const PrimeField& field = PrimeField());

struct CatalogEntry {
  std::string label;
  std::string description;
  int n;
  int r;
  int d_Y;
};
std::vector<CatalogEntry> catalog_listing();

/// Codimension in P^n of the zero scheme of I: N minus the Krull dimension of
/// S/in(I), found as the largest set of variables supporting no leading monomial.
int measured_codimension(const GradedIdeal<PrimeField>& I);

/// Order of vanishing of f at the point x (homogeneous coordinates with some
/// coordinate equal to 1): the lowest degree occurring in f(x + y).
int multiplicity_at_point(const RingGF& ring, const PolyGF& f,
                          std::span<const PrimeField::Elem> x);

/// Coordinates of a seeded random matrix point of exactly the requested rank
/// (an even rank for skew), scaled so its first nonzero coordinate is 1.
std::vector<PrimeField::Elem> sample_rank_point(const EmbeddingCase& c, int rank,
                                                std::uint64_t seed,
                                                const PrimeField& field = PrimeField());

int rank_at(const EmbeddingCase& c, const PrimeField& field,
            std::span<const PrimeField::Elem> coords);

/// Jacobian smoothness certificate for a curve: S/(I + minors) has Hilbert
/// polynomial zero, where the minors are those of size codim of the Jacobian.
bool curve_is_smooth(const GradedIdeal<PrimeField>& I, int codim);

} // namespace embvan
