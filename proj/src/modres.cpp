#include "mcm/modres.hpp"

#include <algorithm>
#include <numeric>

namespace mcm {

namespace {

ModVector column_vector(const GradedMatrix& m, std::size_t j, std::uint32_t offset, const ModuleOrder& order) {
  std::vector<ModTerm> terms;
  const QuotientRing& q = *m.qring();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Polynomial e = q.reduce(m(i, j));
    for (const auto& t : e.terms()) terms.push_back({t.mono, static_cast<std::uint32_t>(offset + i), t.coeff});
  }
  return sort_vector(std::move(terms), order);
}

void add_relation_multiples(ModuleGB& gb, const QuotientRing& q, std::size_t count, std::uint32_t offset) {
  for (std::size_t i = 0; i < count; ++i)
    for (const auto& g : q.basis()) gb.add(to_vector(g, static_cast<std::uint32_t>(offset + i), gb.order()));
}

GradedMatrix zero_column(const QRingPtr& ring, const std::vector<int>& row_deg) {
  return GradedMatrix(ring, PolyMatrix(ring->ring(), row_deg.size(), 1), row_deg,
                      {row_deg.empty() ? 0 : row_deg[0]});
}

}  // namespace

GradedMatrix minimize_columns(const GradedMatrix& m) {
  const QRingPtr& q = m.qring();
  const RingPtr& ring = m.ring();
  const std::size_t n = m.rows();
  if (n == 0) return GradedMatrix(q, PolyMatrix(ring, 0, 0), {}, {});

  std::vector<std::size_t> order_idx(m.cols());
  std::iota(order_idx.begin(), order_idx.end(), 0);
  std::stable_sort(order_idx.begin(), order_idx.end(),
                   [&](std::size_t a, std::size_t b) { return m.col_deg()[a] < m.col_deg()[b]; });

  ModuleOrder order(ring, m.row_deg());
  ModuleGB gb(order);
  add_relation_multiples(gb, *q, n, 0);
  const bool graded = ring->positively_graded();

  std::vector<std::size_t> kept;
  for (std::size_t j : order_idx) {
    ModVector v = column_vector(m, j, 0, order);
    if (v.empty()) continue;
    if (graded)
      gb.complete(m.col_deg()[j]);
    else
      gb.complete();
    if (gb.reduce(v, false).empty()) continue;
    kept.push_back(j);
    gb.add(std::move(v));
  }
  if (kept.empty()) return zero_column(q, m.row_deg());

  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<int> cols;
  for (auto j : kept) cols.push_back(m.col_deg()[j]);
  return GradedMatrix(q, m.entries().select(all_rows, kept).reduced(*q), m.row_deg(), std::move(cols));
}

GradedMatrix syzygies(const GradedMatrix& m) {
  const QRingPtr& q = m.qring();
  const RingPtr& ring = m.ring();
  const std::size_t r = m.rows(), c = m.cols();
  if (c == 0) return GradedMatrix(q, PolyMatrix(ring, 0, 0), {}, {});
  if (r == 0 || m.is_zero_mod()) return GradedMatrix(q, PolyMatrix::identity(ring, c), m.col_deg(), m.col_deg());

  std::vector<int> shifts = m.row_deg();
  shifts.insert(shifts.end(), m.col_deg().begin(), m.col_deg().end());
  ModuleOrder order(ring, shifts, r);
  ModuleGB gb(order, true);
  for (std::size_t j = 0; j < c; ++j) {
    ModVector v = column_vector(m, j, 0, order);
    v.push_back({Monomial{}, static_cast<std::uint32_t>(r + j), Rational(1)});
    gb.add(sort_vector(std::move(v), order));
  }
  add_relation_multiples(gb, *q, r, 0);
  gb.complete();

  std::vector<std::vector<Polynomial>> columns;
  std::vector<int> degrees;
  for (const auto& g : gb.elements()) {
    if (order.in_top(g.front().comp)) continue;
    std::vector<Polynomial> col;
    bool nonzero = false;
    for (std::size_t j = 0; j < c; ++j) {
      Polynomial p = q->reduce(component_of(g, static_cast<std::uint32_t>(r + j), ring));
      nonzero = nonzero || !p.is_zero();
      col.push_back(std::move(p));
    }
    if (!nonzero) continue;
    columns.push_back(std::move(col));
    degrees.push_back(order.degree(g.front().mono, g.front().comp));
  }
  if (columns.empty()) return zero_column(q, m.col_deg());
  PolyMatrix entries(ring, c, columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k)
    for (std::size_t j = 0; j < c; ++j) entries(j, k) = columns[k][j];
  return minimize_columns(GradedMatrix(q, std::move(entries), m.col_deg(), std::move(degrees)));
}

std::vector<GradedMatrix> resolve(const GradedMatrix& m, int steps) {
  if (steps < 1) throw Error("resolve needs at least one step");
  std::vector<GradedMatrix> out{minimize_columns(m)};
  while (static_cast<int>(out.size()) < steps) out.push_back(syzygies(out.back()));
  return out;
}

GradedMatrix prune(const GradedMatrix& input) {
  const QRingPtr& q = input.qring();
  const RingPtr& ring = input.ring();
  PolyMatrix m = input.entries().reduced(*q);
  std::vector<int> rows = input.row_deg(), cols = input.col_deg();

  for (;;) {
    std::size_t pi = m.rows(), pj = m.cols();
    for (std::size_t i = 0; i < m.rows() && pi == m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j).is_unit()) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == m.rows()) break;
    const Rational inv = 1 / m(pi, pj).constant_value();
    for (std::size_t l = 0; l < m.cols(); ++l) {
      if (l == pj || m(pi, l).is_zero()) continue;
      const Polynomial factor = m(pi, l).scaled(inv);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        if (m(i, pj).is_zero()) continue;
        m(i, l) = q->reduce(m(i, l) - factor * m(i, pj));
      }
    }
    std::vector<std::size_t> keep_rows, keep_cols;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != pi) keep_rows.push_back(i);
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (j != pj) keep_cols.push_back(j);
    m = m.select(keep_rows, keep_cols);
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pi));
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(pj));
  }

  std::vector<std::size_t> all_rows(m.rows()), nonzero_cols;
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<int> kept_deg;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!m.column_is_zero(j)) {
      nonzero_cols.push_back(j);
      kept_deg.push_back(cols[j]);
    }
  if (nonzero_cols.empty()) {
    if (m.rows() == 0) return GradedMatrix(q, PolyMatrix(ring, 0, 0), {}, {});
    return zero_column(q, rows);
  }
  return GradedMatrix(q, m.select(all_rows, nonzero_cols), std::move(rows), std::move(kept_deg));
}

}  // namespace mcm
