#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "mcm/polyring.hpp"

namespace mcm {

/// One term of a vector in a free module S^n.
struct ModTerm {
  Monomial mono;
  std::uint32_t comp = 0;
  Rational coeff;
};

/// Terms sorted strictly descending under a ModuleOrder; no zero coefficients.
using ModVector = std::vector<ModTerm>;

/// Term order on S^n: ring order first, then component (lower index is larger).
///
/// With `top_count > 0` the components below `top_count` form an elimination
/// block: any term there beats every term outside it. `shifts` are the
/// generator degrees of the components and only affect degree bookkeeping.
class ModuleOrder {
 public:
  ModuleOrder(RingPtr ring, std::vector<int> shifts, std::size_t top_count = 0,
              bool position_first = false);

  const RingPtr& ring() const { return ring_; }
  std::size_t rank() const { return shifts_.size(); }
  int shift(std::size_t comp) const { return shifts_[comp]; }
  const std::vector<int>& shifts() const { return shifts_; }
  std::size_t top_count() const { return top_count_; }
  bool in_top(std::uint32_t comp) const { return top_count_ == 0 || comp < top_count_; }

  int compare(const Monomial& ma, std::uint32_t ca, const Monomial& mb, std::uint32_t cb) const;
  int compare(const ModTerm& a, const ModTerm& b) const { return compare(a.mono, a.comp, b.mono, b.comp); }
  int degree(const Monomial& m, std::uint32_t comp) const {
    return ring_->weighted_degree(m) + shifts_[comp];
  }

 private:
  RingPtr ring_;
  std::vector<int> shifts_;
  std::size_t top_count_;
  bool position_first_;
};

ModVector sort_vector(std::vector<ModTerm> terms, const ModuleOrder& order);
/// a + c * m * b
ModVector add_scaled(const ModVector& a, const ModVector& b, const Monomial& m, const Rational& c,
                     const ModuleOrder& order);
ModVector make_monic(ModVector v);

/// Buchberger completion for submodules of S^n (n = 1 gives ideals).
///
/// Generators may be added at any time; `complete()` must run before
/// `reduce()` answers membership questions. Pairs are selected by lowest
/// lcm degree with ties broken by insertion index.
class ModuleGB {
 public:
  explicit ModuleGB(ModuleOrder order, bool skip_lower_pairs = false);

  void add(ModVector v);
  /// With `max_degree`, only pairs up to that degree are processed; enough for
  /// membership tests in that degree when the grading is positive.
  void complete(std::optional<int> max_degree = std::nullopt);
  /// Full (or lead-only) reduction against the current basis.
  ModVector reduce(const ModVector& v, bool full = true) const;

  const ModuleOrder& order() const { return order_; }
  /// Current basis, in insertion order (not interreduced).
  const std::vector<ModVector>& elements() const { return basis_; }
  /// Minimal interreduced monic basis, ascending by lead term.
  std::vector<ModVector> reduced_basis() const;

 private:
  struct Pair {
    int degree;
    int total_degree;
    std::size_t first;
    std::size_t second;  // == npos for a pending generator
    Monomial lcm;
    std::uint32_t comp;
    std::size_t serial;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void insert(ModVector v);
  const ModVector* find_divisor(const Monomial& m, std::uint32_t comp) const;

  ModuleOrder order_;
  bool skip_lower_pairs_;
  std::vector<ModVector> basis_;
  std::vector<ModVector> pending_;
  std::vector<Pair> pairs_;
  std::size_t serial_ = 0;
  bool single_component_;
};

ModVector to_vector(const Polynomial& p, std::uint32_t comp, const ModuleOrder& order);
Polynomial component_of(const ModVector& v, std::uint32_t comp, const RingPtr& ring);

// ---------------------------------------------------------------- ideals

/// Reduced Gröbner basis (monic, ascending by lead term) of the ideal.
std::vector<Polynomial> groebner_basis(const std::vector<Polynomial>& gens, const RingPtr& ring);
Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& basis);
Polynomial s_polynomial(const Polynomial& p, const Polynomial& q);
/// True when every S-polynomial of `basis` reduces to zero against it.
bool satisfies_buchberger_criterion(const std::vector<Polynomial>& basis);

/// Polynomial ring modulo a fixed ideal, with its Gröbner basis cached.
class QuotientRing {
 public:
  static std::shared_ptr<const QuotientRing> make(RingPtr ring, std::vector<Polynomial> relations = {});

  const RingPtr& ring() const { return ring_; }
  const std::vector<Polynomial>& relations() const { return relations_; }
  const std::vector<Polynomial>& basis() const { return basis_; }
  bool is_trivial() const { return basis_.empty(); }

  Polynomial reduce(const Polynomial& p) const;
  bool is_zero(const Polynomial& p) const { return reduce(p).is_zero(); }
  Polynomial parse(std::string_view text) const { return parse_polynomial(text, ring_); }
  Polynomial var(std::string_view name) const {
    return Polynomial::variable(ring_, ring_->require_index(name));
  }
  Polynomial constant(const Rational& c) const { return Polynomial::constant(ring_, c); }
  Polynomial zero() const { return Polynomial(ring_); }

 private:
  QuotientRing() = default;
  RingPtr ring_;
  std::vector<Polynomial> relations_;
  std::vector<Polynomial> basis_;
};

using QRingPtr = std::shared_ptr<const QuotientRing>;

/// An ideal of a quotient ring, given by generators (lifted to the ambient ring).
class Ideal {
 public:
  Ideal(QRingPtr ring, std::vector<Polynomial> gens);

  const QRingPtr& ring() const { return ring_; }
  const std::vector<Polynomial>& generators() const { return gens_; }
  /// Gröbner basis of generators plus the defining relations.
  const std::vector<Polynomial>& basis() const { return *basis_; }

  bool contains(const Polynomial& p) const { return normal_form(p, basis()).is_zero(); }
  bool contains(const Ideal& other) const;
  bool is_zero() const;
  bool is_unit() const;
  std::string to_string() const;

 private:
  QRingPtr ring_;
  std::vector<Polynomial> gens_;
  std::shared_ptr<const std::vector<Polynomial>> basis_;
};

bool ideal_equal(const Ideal& a, const Ideal& b);

/// No lead term divides another, tails reduced; zero generators dropped.
/// Reduction also uses the quotient's relations when `ring` is given.
std::vector<Polynomial> interreduce(const std::vector<Polynomial>& gens, const QuotientRing* ring = nullptr);

}  // namespace mcm
