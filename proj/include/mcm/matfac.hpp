#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcm/matrix.hpp"

namespace mcm {

// ---------------------------------------------------------------- rings

/// A hypersurface R = base/(f): matrix factorizations multiply to f·Id in
/// `base`; modules live over `ring`.
struct Hypersurface {
  QRingPtr base;
  QRingPtr ring;
  Polynomial f;
};

/// y1^3 + y1^2*y3 - y2^2*y3 in a ring containing y1, y2, y3.
Polynomial nodal_cubic(const RingPtr& ring);
/// a^3 + a^2 - b^2 in a ring containing a, b.
Polynomial curve_relation(const RingPtr& ring);

/// Q[y1,y2,y3] over the nodal cubic.
const Hypersurface& nodal();
/// Q[y1,y2,y3,a,b]/(a^3+a^2-b^2) over the nodal cubic; a, b have weight 0.
const Hypersurface& parametric();
/// Hypersurface over an arbitrary ring containing y1, y2, y3, with extra
/// relations among the remaining variables.
Hypersurface make_hypersurface(RingPtr ring, std::vector<Polynomial> extra_relations = {});

// ---------------------------------------------------------------- points

/// A point of the projective curve a^3 + a^2 - b^2 = 0 (affine chart z = 1).
class CurvePoint {
 public:
  enum class Kind { Affine, Infinity, Singular, Parametric };

  /// Throws Error if the point is not on the curve; (0,0) becomes Singular.
  static CurvePoint affine(const Rational& l1, const Rational& l2);
  static CurvePoint infinity() { return CurvePoint(Kind::Infinity); }
  static CurvePoint singular() { return CurvePoint(Kind::Singular); }
  static CurvePoint parametric() { return CurvePoint(Kind::Parametric); }
  /// (-1, 0).
  static CurvePoint xi() { return affine(-1, 0); }
  /// Accepts "l1,l2", "xi", "s", "inf" (or "lambda0") and "param".
  static CurvePoint parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ != Kind::Infinity; }
  bool is_regular() const { return kind_ == Kind::Affine || kind_ == Kind::Infinity; }
  const Rational& l1() const { return l1_; }
  const Rational& l2() const { return l2_; }

  /// Affine coordinates as polynomials of `ring` (the symbols a, b when parametric).
  Polynomial first(const RingPtr& ring) const;
  Polynomial second(const RingPtr& ring) const;
  /// The hypersurface the point's families live over.
  const Hypersurface& setting() const { return kind_ == Kind::Parametric ? mcm::parametric() : mcm::nodal(); }

  std::string to_string() const;
  bool operator==(const CurvePoint& other) const;

 private:
  explicit CurvePoint(Kind kind) : kind_(kind) {}
  Kind kind_;
  Rational l1_ = 0, l2_ = 0;
};

// ---------------------------------------------------------------- determinants

Polynomial determinant(const PolyMatrix& m);
/// All size×size minors, rows and columns chosen in lexicographic order.
std::vector<Polynomial> minors(const PolyMatrix& m, std::size_t size);
/// Transposed cofactor matrix: m · adjugate(m) = det(m) · Id.
PolyMatrix adjugate(const PolyMatrix& m);

/// Adjugate as a graded map: rows = col_deg(A), cols = row_deg(A) + deg det A.
GradedMatrix adjoint(const GradedMatrix& a);

/// r with det ≡ c·f^r (c a nonzero rational) in `base`, or nullopt.
std::optional<int> factorization_rank(const Polynomial& det, const Polynomial& f, const QuotientRing& base);

// ---------------------------------------------------------------- factorizations

struct VerifyReport {
  bool ok = false;
  std::optional<int> rank;
  std::vector<std::string> failures;
};

/// Checks A·B = B·A = f·Id in `base`, size compatibility, and det A = c·f^r.
VerifyReport mf_verify(const GradedMatrix& a, const GradedMatrix& b, const Polynomial& f, const QuotientRing& base);

struct MatrixFactorization {
  GradedMatrix A;
  GradedMatrix B;
  Polynomial f;
  QRingPtr base;
  int rank = 0;

  std::size_t size() const { return A.rows(); }
  VerifyReport verify() const { return mf_verify(A, B, f, *base); }
  bool operator==(const MatrixFactorization& other) const { return A == other.A && B == other.B; }
};

/// The unique B with A·B = f·Id: adjugate(A) / (c·f^(r-1)). Throws if A is
/// not part of a factorization.
GradedMatrix partner(const GradedMatrix& a, const Hypersurface& h);
/// Builds (A, partner(A)); throws Error if det A is not c·f^r with r ≥ 0.
MatrixFactorization make_factorization(const GradedMatrix& a, const Hypersurface& h);

/// (Aᵀ, Bᵀ): Coker Aᵀ is the dual of Coker A.
MatrixFactorization mf_dual(const MatrixFactorization& mf);
/// Tensor with R(k).
MatrixFactorization mf_shift(const MatrixFactorization& mf, int k);
MatrixFactorization mf_direct_sum(const MatrixFactorization& x, const MatrixFactorization& y);
/// Shifted so that the smallest source twist of A equals `anchor`.
MatrixFactorization mf_normalize(const MatrixFactorization& mf, int anchor = 0);

// ---------------------------------------------------------------- invariants

/// Fitt_k: ideal of the (rows − k)-minors, the unit ideal when rows ≤ k.
Ideal fitting_ideal(const GradedMatrix& m, int k);

enum class LocalVerdict { LocallyFree, NotLocallyFree, Conditional };

struct LocalFreeness {
  LocalVerdict verdict;
  /// Ideal in the parameters whose vanishing means not locally free.
  Ideal condition;
};

/// Fitt_k evaluated at y1 = y2 = 0, y3 = 1.
LocalFreeness locally_free_test(const GradedMatrix& m, int k);

enum class Equivalence { Distinct, Undetermined };

struct EquivalenceReport {
  Equivalence verdict;
  std::string reason;
};

/// Separates presentations by size, twist multisets up to a common shift,
/// and Fitting ideals; both are pruned first.
EquivalenceReport equivalence_invariants(const GradedMatrix& m1, const GradedMatrix& m2);

std::string to_string(LocalVerdict v);

}  // namespace mcm
