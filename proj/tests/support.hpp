#pragma once

#include <random>

#include "mcm/groebner.hpp"
#include "mcm/matrix.hpp"

namespace testing {

using namespace mcm;

inline RingPtr y_ring() {
  static RingPtr ring = PolyRing::make({"y1", "y2", "y3"});
  return ring;
}

inline Polynomial P(const RingPtr& ring, std::string_view text) { return parse_polynomial(text, ring); }

inline Rational random_rational(std::mt19937& rng, int span = 5) {
  std::uniform_int_distribution<int> num(-span, span), den(1, 3);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rational random_nonzero(std::mt19937& rng, int span = 5) {
  for (;;) {
    Rational q = random_rational(rng, span);
    if (q != 0) return q;
  }
}

/// Random polynomial with up to `terms` terms of total degree <= max_degree.
inline Polynomial random_poly(std::mt19937& rng, const RingPtr& ring, int max_degree, int terms) {
  std::uniform_int_distribution<int> count(0, terms);
  std::vector<Term> out;
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    Monomial m;
    std::uniform_int_distribution<int> deg(0, max_degree);
    int remaining = deg(rng);
    std::uniform_int_distribution<std::size_t> var(0, ring->nvars() - 1);
    while (remaining-- > 0) {
      const std::size_t v = var(rng);
      m.set(v, m[v] + 1);
    }
    out.push_back({m, random_rational(rng)});
  }
  return Polynomial::from_terms(ring, std::move(out));
}

/// Random homogeneous polynomial of the given weighted degree in the weight-1 variables.
inline Polynomial random_homogeneous(std::mt19937& rng, const RingPtr& ring, int degree, double density = 0.6) {
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < ring->nvars(); ++i)
    if (ring->weight(i) == 1) vars.push_back(i);
  std::bernoulli_distribution use(density);
  std::vector<Term> out;
  for (const auto& m : monomials_of_degree(*ring, vars, degree))
    if (use(rng)) out.push_back({m, random_rational(rng)});
  return Polynomial::from_terms(ring, std::move(out));
}

}  // namespace testing
