#include "mcm/matrix.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace mcm {

PolyMatrix::PolyMatrix(RingPtr ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, Polynomial(ring_)) {}

PolyMatrix PolyMatrix::identity(RingPtr ring, std::size_t n) {
  PolyMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Polynomial::constant(ring, 1);
  return m;
}

PolyMatrix PolyMatrix::from_rows(RingPtr ring, const std::vector<std::vector<Polynomial>>& rows) {
  const std::size_t nc = rows.empty() ? 0 : rows.front().size();
  PolyMatrix m(ring, rows.size(), nc);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc) throw Error("ragged matrix rows");
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = rows[i][j].map_to(ring);
  }
  return m;
}

PolyMatrix PolyMatrix::parse(RingPtr ring, std::string_view text) {
  std::vector<std::vector<Polynomial>> rows;
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t b = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i < s.size() && s[i] == '(') ++depth;
      if (i < s.size() && s[i] == ')') --depth;
      if (i == s.size() || (s[i] == sep && depth == 0)) {
        parts.push_back(s.substr(b, i - b));
        b = i + 1;
      }
    }
    return parts;
  };
  auto trimmed_empty = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  };
  for (auto row : split(text, ';')) {
    if (trimmed_empty(row)) continue;
    std::vector<Polynomial> entries;
    for (auto e : split(row, ',')) entries.push_back(parse_polynomial(e, ring));
    rows.push_back(std::move(entries));
  }
  return from_rows(ring, rows);
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& other) const {
  if (cols_ != other.rows_) throw Error("matrix size mismatch in product");
  PolyMatrix r(ring_ ? ring_ : other.ring_, rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Polynomial& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        const Polynomial& b = other(k, j);
        if (!b.is_zero()) r(i, j) += a * b;
      }
    }
  return r;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error("matrix size mismatch in sum");
  PolyMatrix r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += other.data_[k];
  return r;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& other) const { return *this + (-other); }

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix r = *this;
  for (auto& p : r.data_) p = -p;
  return r;
}

PolyMatrix PolyMatrix::scaled(const Polynomial& p) const {
  PolyMatrix r = *this;
  for (auto& e : r.data_) e = e * p;
  return r;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix r(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

PolyMatrix PolyMatrix::kron(const PolyMatrix& other) const {
  PolyMatrix r(ring_, rows_ * other.rows_, cols_ * other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const Polynomial& a = (*this)(i, j);
      if (a.is_zero()) continue;
      for (std::size_t k = 0; k < other.rows_; ++k)
        for (std::size_t l = 0; l < other.cols_; ++l) r(i * other.rows_ + k, j * other.cols_ + l) = a * other(k, l);
    }
  return r;
}

PolyMatrix PolyMatrix::hconcat(const PolyMatrix& other) const {
  if (rows_ != other.rows_) throw Error("row count mismatch in concat");
  PolyMatrix r(ring_, rows_, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < other.cols_; ++j) r(i, cols_ + j) = other(i, j);
  }
  return r;
}

PolyMatrix PolyMatrix::vconcat(const PolyMatrix& other) const { return transpose().hconcat(other.transpose()).transpose(); }

PolyMatrix PolyMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error("block out of range");
  PolyMatrix r(ring_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

PolyMatrix PolyMatrix::select(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const {
  PolyMatrix r(ring_, row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i)
    for (std::size_t j = 0; j < col_idx.size(); ++j) r(i, j) = (*this)(row_idx[i], col_idx[j]);
  return r;
}

PolyMatrix PolyMatrix::direct_sum(const PolyMatrix& other) const {
  PolyMatrix r(ring_, rows_ + other.rows_, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
  for (std::size_t i = 0; i < other.rows_; ++i)
    for (std::size_t j = 0; j < other.cols_; ++j) r(rows_ + i, cols_ + j) = other(i, j);
  return r;
}

PolyMatrix PolyMatrix::reduced(const QuotientRing& q) const {
  PolyMatrix r = *this;
  if (q.is_trivial()) return r;
  for (auto& e : r.data_) e = q.reduce(e);
  return r;
}

PolyMatrix PolyMatrix::map_to(const RingPtr& target) const {
  PolyMatrix r(target, rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k].map_to(target);
  return r;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

bool PolyMatrix::column_is_zero(std::size_t j) const {
  for (std::size_t i = 0; i < rows_; ++i)
    if (!(*this)(i, j).is_zero()) return false;
  return true;
}

bool PolyMatrix::operator==(const PolyMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

std::string PolyMatrix::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) s += ", ";
      s += (*this)(i, j).to_string();
    }
  }
  return s;
}

std::string PolyMatrix::to_pretty_string() const {
  std::string s;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) s += ", ";
      s += (*this)(i, j).to_string();
    }
    s += "\n";
  }
  return s;
}

// ---------------------------------------------------------------- GradedMatrix

GradedMatrix::GradedMatrix(QRingPtr ring, PolyMatrix entries, std::vector<int> row_deg, std::vector<int> col_deg)
    : ring_(std::move(ring)), m_(std::move(entries)), row_deg_(std::move(row_deg)), col_deg_(std::move(col_deg)) {
  if (row_deg_.size() != m_.rows() || col_deg_.size() != m_.cols()) throw Error("twist vector length mismatch");
  if (m_.ring() && m_.ring() != ring_->ring()) m_ = m_.map_to(ring_->ring());
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = 0; j < m_.cols(); ++j) {
      const Polynomial& p = m_(i, j);
      if (p.is_zero()) continue;
      auto d = p.homogeneous_degree();
      if (!d) throw Error("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not homogeneous: " + p.to_string());
      if (*d != col_deg_[j] - row_deg_[i])
        throw Error("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") has degree " +
                    std::to_string(*d) + ", twists require " + std::to_string(col_deg_[j] - row_deg_[i]));
    }
}

GradedMatrix GradedMatrix::infer(QRingPtr ring, PolyMatrix entries) {
  const std::size_t r = entries.rows(), c = entries.cols();
  std::vector<std::optional<int>> rd(r), cd(c);
  auto degree_of = [&](std::size_t i, std::size_t j) -> std::optional<int> {
    const Polynomial& p = entries(i, j);
    if (p.is_zero()) return std::nullopt;
    auto d = p.homogeneous_degree();
    if (!d) throw Error("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not homogeneous");
    return d;
  };
  // Breadth-first propagation over the bipartite graph of nonzero entries.
  for (std::size_t seed = 0; seed < r; ++seed) {
    if (rd[seed]) continue;
    rd[seed] = 0;
    std::deque<std::pair<bool, std::size_t>> queue{{true, seed}};
    while (!queue.empty()) {
      auto [is_row, k] = queue.front();
      queue.pop_front();
      if (is_row) {
        for (std::size_t j = 0; j < c; ++j) {
          auto d = degree_of(k, j);
          if (!d) continue;
          const int want = *rd[k] + *d;
          if (!cd[j]) {
            cd[j] = want;
            queue.push_back({false, j});
          } else if (*cd[j] != want) {
            throw Error("entries admit no consistent twists");
          }
        }
      } else {
        for (std::size_t i = 0; i < r; ++i) {
          auto d = degree_of(i, k);
          if (!d) continue;
          const int want = *cd[k] - *d;
          if (!rd[i]) {
            rd[i] = want;
            queue.push_back({true, i});
          } else if (*rd[i] != want) {
            throw Error("entries admit no consistent twists");
          }
        }
      }
    }
  }
  std::vector<int> rows(r), cols(c);
  for (std::size_t i = 0; i < r; ++i) rows[i] = *rd[i];
  for (std::size_t j = 0; j < c; ++j) cols[j] = cd[j] ? *cd[j] : (r ? rows[0] : 0);
  return GradedMatrix(std::move(ring), std::move(entries), std::move(rows), std::move(cols));
}

GradedMatrix GradedMatrix::infer_columns(QRingPtr ring, PolyMatrix entries, std::vector<int> row_deg) {
  std::vector<int> cols(entries.cols(), row_deg.empty() ? 0 : row_deg[0]);
  for (std::size_t j = 0; j < entries.cols(); ++j)
    for (std::size_t i = 0; i < entries.rows(); ++i) {
      const Polynomial& p = entries(i, j);
      if (p.is_zero()) continue;
      auto d = p.homogeneous_degree();
      if (!d) throw Error("entry is not homogeneous: " + p.to_string());
      cols[j] = row_deg[i] + *d;
      break;
    }
  return GradedMatrix(std::move(ring), std::move(entries), std::move(row_deg), std::move(cols));
}

GradedMatrix GradedMatrix::shifted(int k) const {
  GradedMatrix r = *this;
  for (auto& d : r.row_deg_) d -= k;
  for (auto& d : r.col_deg_) d -= k;
  return r;
}

GradedMatrix GradedMatrix::transpose() const {
  std::vector<int> rows, cols;
  for (int d : col_deg_) rows.push_back(-d);
  for (int d : row_deg_) cols.push_back(-d);
  return GradedMatrix(ring_, m_.transpose(), std::move(rows), std::move(cols));
}

GradedMatrix GradedMatrix::reduced() const {
  GradedMatrix r = *this;
  r.m_ = m_.reduced(*ring_);
  return r;
}

GradedMatrix GradedMatrix::direct_sum(const GradedMatrix& other) const {
  std::vector<int> rows = row_deg_, cols = col_deg_;
  rows.insert(rows.end(), other.row_deg_.begin(), other.row_deg_.end());
  cols.insert(cols.end(), other.col_deg_.begin(), other.col_deg_.end());
  return GradedMatrix(ring_, m_.direct_sum(other.m_), std::move(rows), std::move(cols));
}

bool GradedMatrix::is_zero_mod() const { return m_.reduced(*ring_).is_zero(); }

bool GradedMatrix::has_unit_entry() const {
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (ring_->reduce(m_(i, j)).is_unit()) return true;
  return false;
}

bool GradedMatrix::operator==(const GradedMatrix& other) const {
  return m_ == other.m_ && row_deg_ == other.row_deg_ && col_deg_ == other.col_deg_;
}

std::string GradedMatrix::to_string() const {
  std::ostringstream os;
  os << "rows:";
  for (int d : row_deg_) os << " " << d;
  os << "\ncols:";
  for (int d : col_deg_) os << " " << d;
  os << "\n" << m_.to_pretty_string();
  return os.str();
}

GradedMatrix compose(const GradedMatrix& a, const GradedMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix size mismatch in product");
  for (std::size_t k = 0; k < a.cols(); ++k)
    if (a.col_deg()[k] != b.row_deg()[k]) throw Error("twists do not compose");
  return GradedMatrix(a.qring(), a.entries() * b.entries(), a.row_deg(), b.col_deg());
}

}  // namespace mcm
