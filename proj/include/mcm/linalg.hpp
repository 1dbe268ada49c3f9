#pragma once

#include <vector>

#include "mcm/polyring.hpp"

namespace mcm {

/// Dense matrix over the rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  void append_row(const std::vector<Rational>& row);
  std::vector<Rational> row(std::size_t i) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form; the pivot in each column is the first nonzero
/// entry at or below the current row.
struct Echelon {
  RationalMatrix reduced;
  std::vector<std::size_t> pivot_cols;
};

Echelon row_reduce(RationalMatrix m);
std::size_t rank(const RationalMatrix& m);
/// Basis of {x : m x = 0}, one vector per free column, in column order.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m);
/// Rank of the span of the given vectors.
std::size_t span_rank(const std::vector<std::vector<Rational>>& vectors, std::size_t length);

}  // namespace mcm
