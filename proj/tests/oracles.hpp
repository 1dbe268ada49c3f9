#pragma once

#include <map>
#include <string>
#include <vector>

#include "mcm/matfac.hpp"

namespace testing {

using namespace mcm;

// Dense self-extension count: unknowns are all monomial coefficients of D with
// deg D(i,j) = col(j) - row(i); the condition A'DA' = 0 mod f is read off after
// polynomial division by f, and the trivial span {UA - AV} is enumerated
// entrywise. Elimination uses its own fraction-free routine.
inline int oracle_rank(std::vector<std::vector<Rational>> rows) {
  int rank = 0;
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < n && rank < int(rows.size()); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == std::size_t(rank) || rows[r][c] == 0) continue;
      const Rational factor = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < n; ++k) rows[r][k] -= factor * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline Rational coefficient_of(const Polynomial& p, const Monomial& m) {
  for (const auto& t : p.terms())
    if (t.mono == m) return t.coeff;
  return 0;
}

inline Polynomial remainder_mod_f(const Polynomial& p) { return divide(p, nodal().f).second; }

inline int oracle_stability(const MatrixFactorization& x) {
  const auto& a = x.A;
  const auto& ap = x.B;
  const RingPtr ring = a.ring();
  const std::vector<std::size_t> ys{0, 1, 2};
  struct Slot {
    std::size_t i, j;
    Monomial m;
  };
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (const auto& m : monomials_of_degree(*ring, ys, a.col_deg()[j] - a.row_deg()[i])) slots.push_back({i, j, m});
  // Condition: one column per slot, rows indexed by (entry, monomial) of the remainder.
  std::vector<std::map<std::string, Rational>> images;
  std::map<std::string, std::size_t> keys;
  for (const auto& s : slots) {
    std::map<std::string, Rational> img;
    for (std::size_t r = 0; r < ap.rows(); ++r)
      for (std::size_t c = 0; c < ap.cols(); ++c) {
        Polynomial e = remainder_mod_f(ap(r, s.i).times_monomial(s.m) * ap(s.j, c));
        for (const auto& t : e.terms()) {
          std::string key = std::to_string(r) + "," + std::to_string(c) + ":" + Polynomial::monomial(ring, t.mono).to_string();
          keys.emplace(key, keys.size());
          img[key] += t.coeff;
        }
      }
    images.push_back(std::move(img));
  }
  std::vector<std::vector<Rational>> system(keys.size(), std::vector<Rational>(slots.size()));
  for (std::size_t u = 0; u < slots.size(); ++u)
    for (const auto& [k, v] : images[u]) system[keys[k]][u] = v;
  const int solutions = int(slots.size()) - oracle_rank(system);

  auto vec_of = [&](const PolyMatrix& d) {
    std::vector<Rational> v(slots.size());
    for (std::size_t u = 0; u < slots.size(); ++u) v[u] = coefficient_of(d(slots[u].i, slots[u].j), slots[u].m);
    return v;
  };
  std::vector<std::vector<Rational>> trivial;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      // U A with U(i,l) of degree row(l) - row(i); A V with V(l,j) of degree col(j) - col(l).
      for (const auto& m : monomials_of_degree(*ring, ys, a.row_deg()[l] - a.row_deg()[i])) {
        PolyMatrix u(ring, n, n);
        u(i, l) = Polynomial::monomial(ring, m);
        trivial.push_back(vec_of(u * a.entries()));
      }
      for (const auto& m : monomials_of_degree(*ring, ys, a.col_deg()[l] - a.col_deg()[i])) {
        PolyMatrix v(ring, n, n);
        v(i, l) = Polynomial::monomial(ring, m);
        trivial.push_back(vec_of(a.entries() * v));
      }
    }
  return solutions - oracle_rank(trivial);
}

}  // namespace testing
