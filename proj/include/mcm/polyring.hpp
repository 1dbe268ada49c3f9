#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mcm {

using Rational = mpq_class;

inline constexpr std::size_t kMaxVars = 32;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class RingMismatch : public Error {
 public:
  RingMismatch() : Error("operands belong to different rings") {}
};

/// Exponent vector over at most kMaxVars variables.
class Monomial {
 public:
  Monomial() { exps_.fill(0); }

  unsigned operator[](std::size_t i) const { return exps_[i]; }
  void set(std::size_t i, unsigned e);
  int degree() const { return degree_; }

  Monomial operator*(const Monomial& other) const;
  /// Requires other.divides(*this).
  Monomial operator/(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  Monomial gcd(const Monomial& other) const;

  bool operator==(const Monomial& other) const { return exps_ == other.exps_; }
  bool operator!=(const Monomial& other) const { return !(*this == other); }
  std::size_t hash() const;

 private:
  std::array<std::uint16_t, kMaxVars> exps_;
  int degree_ = 0;
};

/// Variables, block degrevlex order, and grading weights.
///
/// Variables are split into contiguous blocks; monomials are compared block
/// by block, each block by degree-reverse-lexicographic order. The grading
/// weight of a variable is 0 or 1 and is used only for homogeneity and twist
/// bookkeeping; parameters such as curve coordinates carry weight 0.
class PolyRing {
 public:
  static std::shared_ptr<const PolyRing> make(std::vector<std::string> names,
                                              std::vector<std::size_t> block_sizes = {},
                                              std::vector<int> weights = {});

  std::size_t nvars() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require_index(std::string_view name) const;
  const std::vector<std::size_t>& block_sizes() const { return block_sizes_; }
  int weight(std::size_t i) const { return weights_[i]; }
  bool positively_graded() const;

  /// Returns -1, 0 or 1.
  int compare(const Monomial& a, const Monomial& b) const;
  int weighted_degree(const Monomial& m) const;

  /// Singular-style description, e.g. "(c,dp(3),dp(9),dp(2))".
  std::string describe_order() const;

 private:
  PolyRing() = default;
  std::vector<std::string> names_;
  std::vector<std::size_t> block_sizes_;
  std::vector<std::size_t> block_begin_;
  std::vector<int> weights_;
};

using RingPtr = std::shared_ptr<const PolyRing>;

struct Term {
  Monomial mono;
  Rational coeff;
};

/// Sparse polynomial with rational coefficients; terms are stored in strictly
/// descending order with respect to the ring's monomial order.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

  static Polynomial constant(RingPtr ring, const Rational& c);
  static Polynomial variable(RingPtr ring, std::size_t index);
  static Polynomial monomial(RingPtr ring, const Monomial& m, const Rational& c = 1);
  /// Builds from unsorted terms; combines duplicates and drops zeros.
  static Polynomial from_terms(RingPtr ring, std::vector<Term> terms);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Nonzero rational constant.
  bool is_unit() const;
  Rational constant_value() const;

  const Term& lead() const { return terms_.front(); }
  const Monomial& lead_monomial() const { return terms_.front().mono; }
  const Rational& lead_coeff() const { return terms_.front().coeff; }

  int total_degree() const;
  /// Weighted degree if all terms share it, nullopt otherwise (and for zero).
  std::optional<int> homogeneous_degree() const;
  unsigned degree_in(std::size_t var) const;
  bool involves(std::size_t var) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other) { return *this = *this + other; }
  Polynomial& operator-=(const Polynomial& other) { return *this = *this - other; }
  Polynomial& operator*=(const Polynomial& other) { return *this = *this * other; }
  Polynomial scaled(const Rational& c) const;
  Polynomial times_monomial(const Monomial& m, const Rational& c = 1) const;
  Polynomial pow(unsigned e) const;
  Polynomial monic() const;

  bool operator==(const Polynomial& other) const;
  bool operator!=(const Polynomial& other) const { return !(*this == other); }

  /// Replace variable `var` by `value` (same ring).
  Polynomial substitute(std::size_t var, const Polynomial& value) const;
  /// Re-express in another ring, matching variables by name.
  Polynomial map_to(const RingPtr& target) const;

  std::string to_string() const;

 private:
  friend class PolyBuilder;
  RingPtr ring_;
  std::vector<Term> terms_;
};

Polynomial operator*(const Rational& c, const Polynomial& p);

/// Exact division; throws Error if `divisor` does not divide `p`.
Polynomial divide_exact(const Polynomial& p, const Polynomial& divisor);
/// Division by a single polynomial: returns (quotient, remainder).
std::pair<Polynomial, Polynomial> divide(const Polynomial& p, const Polynomial& divisor);

/// Parses the grammar documented in README.md.
Polynomial parse_polynomial(std::string_view text, const RingPtr& ring);

/// p = sum coefficient_k * v^k, powers strictly decreasing.
std::vector<std::pair<unsigned, Polynomial>> coeff_split(const Polynomial& p, std::size_t var);

/// Divides p by the largest monomial in `vars` dividing every term.
Polynomial strip_monomial_factors(const Polynomial& p, std::span<const std::size_t> vars);

/// Monomials of the given weighted degree in the listed variables, descending.
std::vector<Monomial> monomials_of_degree(const PolyRing& ring, std::span<const std::size_t> vars,
                                          int degree);

std::string rational_to_string(const Rational& q);
Rational parse_rational(std::string_view text);

}  // namespace mcm
