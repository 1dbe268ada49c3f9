#pragma once

#include <map>
#include <string>
#include <vector>

#include "mcm/linalg.hpp"
#include "mcm/matfac.hpp"

namespace mcm {

/// Extensions 0 → Coker A → E → Coker B ⊗ R(k) → 0 with E = Coker [[A, D], [0, B]].
struct ExtProblem {
  MatrixFactorization left;
  MatrixFactorization right;
  int twist = 0;
};

/// Required degree of D(i,j); negative means the entry is forced to zero.
using DegreeTemplate = std::vector<std::vector<int>>;

DegreeTemplate degree_template(const GradedMatrix& a, const GradedMatrix& b, int twist);
bool all_negative(const DegreeTemplate& t);

/// One rational unknown: the coefficient of `mono` in D(row, col).
struct ExtUnknown {
  std::size_t row;
  std::size_t col;
  Monomial mono;
};

struct ExtSolutionSpace {
  DegreeTemplate degrees;
  std::vector<ExtUnknown> unknowns;
  std::vector<PolyMatrix> solution_basis;
  std::vector<PolyMatrix> trivial_basis;
  /// Solutions independent modulo the trivial ones; as many as quotient_dimension.
  std::vector<PolyMatrix> representatives;
  std::size_t condition_rank = 0;
  int quotient_dimension = 0;
};

/// Dense solve of A'·D·B' ≡ 0 in R over the template, modulo D = A·U + V·B.
/// Throws Error for parametric rings.
ExtSolutionSpace solve_extensions(const ExtProblem& problem);

/// Coefficient vector of D in the problem's unknown layout.
std::vector<Rational> coordinates(const ExtSolutionSpace& space, const PolyMatrix& d);

/// True when A'·D·B' vanishes in R.
bool satisfies_condition(const ExtProblem& problem, const PolyMatrix& d);

/// M = [[A, D], [0, B(k)]] with partner [[A', -C], [0, B']] where A·C = D·B'.
/// Throws Error when the condition fails.
MatrixFactorization build_extension(const ExtProblem& problem, const PolyMatrix& d);

/// dim of self-extensions modulo D ~ D + U·A - A·V; errors for non locally
/// free, free or parametric input.
int stability_dimension(const MatrixFactorization& mf);

struct TwistScan {
  int twist;
  int dimension;
  bool split;
};

std::vector<TwistScan> scan_twists(const MatrixFactorization& left, const MatrixFactorization& right, int low,
                                   int high);

// ---------------------------------------------------------------- parametric conditions

struct CondextOptions {
  std::string split_variable = "y1";
  std::vector<std::string> strip_variables{"y2", "y3"};
};

/// Coefficients in the split variable of the reduced entries of adj(A)·D·adj(B),
/// interreduced in `ring` with monomial factors in the strip variables removed.
std::vector<Polynomial> condext(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& d,
                                const QuotientRing& ring, const CondextOptions& options = {});

/// Strips monomial factors in the named variables from every nonzero generator.
std::vector<Polynomial> simplify_generators(const std::vector<Polynomial>& gens,
                                            const std::vector<std::string>& variables);

/// Simultaneous substitution of variables by polynomials.
Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& values);
PolyMatrix substitute(const PolyMatrix& m, const std::map<std::string, Polynomial>& values);

}  // namespace mcm
