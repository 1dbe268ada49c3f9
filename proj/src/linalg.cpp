#include "mcm/linalg.hpp"

namespace mcm {

void RationalMatrix::append_row(const std::vector<Rational>& row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) throw Error("row length mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<Rational> RationalMatrix::row(std::size_t i) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

Echelon row_reduce(RationalMatrix m) {
  Echelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (m(r, j) != 0) m(i, j) -= factor * m(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const RationalMatrix& m) { return row_reduce(m).pivot_cols.size(); }

std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m) {
  Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t k = 0; k < e.pivot_cols.size(); ++k) v[e.pivot_cols[k]] = -e.reduced(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t span_rank(const std::vector<std::vector<Rational>>& vectors, std::size_t length) {
  RationalMatrix m(0, length);
  for (const auto& v : vectors) m.append_row(v);
  return rank(m);
}

}  // namespace mcm
