#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcm/groebner.hpp"

namespace mcm {

/// Dense matrix of polynomials over one ambient ring.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(RingPtr ring, std::size_t rows, std::size_t cols);

  static PolyMatrix identity(RingPtr ring, std::size_t n);
  static PolyMatrix from_rows(RingPtr ring, const std::vector<std::vector<Polynomial>>& rows);
  /// "a, b; c, d" with entries in the polynomial grammar.
  static PolyMatrix parse(RingPtr ring, std::string_view text);

  const RingPtr& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  const Polynomial& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Polynomial& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  PolyMatrix operator*(const PolyMatrix& other) const;
  PolyMatrix operator+(const PolyMatrix& other) const;
  PolyMatrix operator-(const PolyMatrix& other) const;
  PolyMatrix operator-() const;
  PolyMatrix scaled(const Polynomial& p) const;
  PolyMatrix transpose() const;
  PolyMatrix kron(const PolyMatrix& other) const;
  /// Side by side: [this | other].
  PolyMatrix hconcat(const PolyMatrix& other) const;
  /// Stacked: [this ; other].
  PolyMatrix vconcat(const PolyMatrix& other) const;
  PolyMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  PolyMatrix select(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const;
  PolyMatrix direct_sum(const PolyMatrix& other) const;
  PolyMatrix reduced(const QuotientRing& q) const;
  PolyMatrix map_to(const RingPtr& target) const;

  bool is_zero() const;
  bool column_is_zero(std::size_t j) const;
  bool operator==(const PolyMatrix& other) const;
  bool operator!=(const PolyMatrix& other) const { return !(*this == other); }

  /// Rows separated by ";", entries by ",".
  std::string to_string() const;
  /// One row per line, entries separated by ", ".
  std::string to_pretty_string() const;

 private:
  RingPtr ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Polynomial> data_;
};

/// Matrix over a quotient ring, read as a graded map
/// ⊕ R(−col_deg[j]) → ⊕ R(−row_deg[i]); entry (i,j) has degree col_deg[j] − row_deg[i].
class GradedMatrix {
 public:
  GradedMatrix() = default;
  /// Validates homogeneity; throws Error on an inconsistent entry.
  GradedMatrix(QRingPtr ring, PolyMatrix entries, std::vector<int> row_deg, std::vector<int> col_deg);

  /// Twists inferred from entry degrees, anchored at row degree 0 per connected block.
  static GradedMatrix infer(QRingPtr ring, PolyMatrix entries);
  /// Column twists inferred from the given row twists; zero columns take row_deg[0].
  static GradedMatrix infer_columns(QRingPtr ring, PolyMatrix entries, std::vector<int> row_deg);

  const QRingPtr& qring() const { return ring_; }
  const RingPtr& ring() const { return ring_->ring(); }
  const PolyMatrix& entries() const { return m_; }
  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  const Polynomial& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const std::vector<int>& row_deg() const { return row_deg_; }
  const std::vector<int>& col_deg() const { return col_deg_; }

  /// Tensor with R(k): every twist decreases by k.
  GradedMatrix shifted(int k) const;
  GradedMatrix transpose() const;
  /// Entries reduced to normal form in the quotient.
  GradedMatrix reduced() const;
  GradedMatrix direct_sum(const GradedMatrix& other) const;
  bool is_zero_mod() const;
  bool has_unit_entry() const;

  bool operator==(const GradedMatrix& other) const;

  std::string to_string() const;

 private:
  QRingPtr ring_;
  PolyMatrix m_;
  std::vector<int> row_deg_;
  std::vector<int> col_deg_;
};

/// Composition of graded maps; twists taken from the outer factors.
GradedMatrix compose(const GradedMatrix& a, const GradedMatrix& b);

}  // namespace mcm
