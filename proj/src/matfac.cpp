#include "mcm/matfac.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

#include "mcm/linalg.hpp"
#include "mcm/modres.hpp"

namespace mcm {

// ---------------------------------------------------------------- rings

Polynomial nodal_cubic(const RingPtr& ring) { return parse_polynomial("y1^3+y1^2*y3-y2^2*y3", ring); }

Polynomial curve_relation(const RingPtr& ring) { return parse_polynomial("a^3+a^2-b^2", ring); }

Hypersurface make_hypersurface(RingPtr ring, std::vector<Polynomial> extra_relations) {
  Hypersurface h;
  h.f = nodal_cubic(ring);
  h.base = QuotientRing::make(ring, extra_relations);
  extra_relations.insert(extra_relations.begin(), h.f);
  h.ring = QuotientRing::make(std::move(ring), std::move(extra_relations));
  return h;
}

const Hypersurface& nodal() {
  static const Hypersurface h = make_hypersurface(PolyRing::make({"y1", "y2", "y3"}));
  return h;
}

const Hypersurface& parametric() {
  static const Hypersurface h = [] {
    RingPtr ring = PolyRing::make({"y1", "y2", "y3", "a", "b"}, {3, 2}, {1, 1, 1, 0, 0});
    return make_hypersurface(ring, {curve_relation(ring)});
  }();
  return h;
}

// ---------------------------------------------------------------- points

CurvePoint CurvePoint::affine(const Rational& l1, const Rational& l2) {
  if (l1 * l1 * l1 + l1 * l1 - l2 * l2 != 0)
    throw Error("point (" + rational_to_string(l1) + "," + rational_to_string(l2) + ") is not on the curve");
  if (l1 == 0 && l2 == 0) return singular();
  CurvePoint p(Kind::Affine);
  p.l1_ = l1;
  p.l2_ = l2;
  return p;
}

CurvePoint CurvePoint::parse(std::string_view text) {
  std::string t(text);
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
  if (t == "xi") return xi();
  if (t == "s" || t == "singular") return singular();
  if (t == "inf" || t == "lambda0" || t == "0:1:0") return infinity();
  if (t == "param" || t == "parametric" || t == "a,b") return parametric();
  std::string body = t;
  if (body.size() >= 2 && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string::npos) throw Error("cannot parse curve point '" + t + "'");
  return affine(parse_rational(body.substr(0, comma)), parse_rational(body.substr(comma + 1)));
}

Polynomial CurvePoint::first(const RingPtr& ring) const {
  switch (kind_) {
    case Kind::Parametric: return Polynomial::variable(ring, ring->require_index("a"));
    case Kind::Infinity: throw Error("the point at infinity has no affine coordinates");
    default: return Polynomial::constant(ring, l1_);
  }
}

Polynomial CurvePoint::second(const RingPtr& ring) const {
  switch (kind_) {
    case Kind::Parametric: return Polynomial::variable(ring, ring->require_index("b"));
    case Kind::Infinity: throw Error("the point at infinity has no affine coordinates");
    default: return Polynomial::constant(ring, l2_);
  }
}

std::string CurvePoint::to_string() const {
  switch (kind_) {
    case Kind::Affine: return "(" + rational_to_string(l1_) + "," + rational_to_string(l2_) + ")";
    case Kind::Infinity: return "(0:1:0)";
    case Kind::Singular: return "s";
    case Kind::Parametric: return "(a,b)";
  }
  return "";
}

bool CurvePoint::operator==(const CurvePoint& other) const {
  return kind_ == other.kind_ && l1_ == other.l1_ && l2_ == other.l2_;
}

// ---------------------------------------------------------------- determinants

namespace {

constexpr std::size_t kMaxMinorCols = 16;

// For fixed rows, table[mask] = det of rows[0..popcount(mask)) against the
// columns in mask, by expansion along the last row.
std::vector<Polynomial> minor_table(const PolyMatrix& m, const std::vector<std::size_t>& rows,
                                    const std::vector<std::size_t>& cols, std::size_t size) {
  const std::size_t c = cols.size();
  std::vector<Polynomial> table(std::size_t{1} << c, Polynomial(m.ring()));
  table[0] = Polynomial::constant(m.ring(), 1);
  std::vector<std::vector<std::uint32_t>> by_count(size + 1);
  for (std::uint32_t mask = 0; mask < (1u << c); ++mask) {
    const auto pc = static_cast<std::size_t>(std::popcount(mask));
    if (pc <= size) by_count[pc].push_back(mask);
  }
  for (std::size_t t = 1; t <= size; ++t) {
    const std::size_t row = rows[t - 1];
    for (std::uint32_t mask : by_count[t]) {
      Polynomial acc(m.ring());
      int greater = 0;
      for (int bit = static_cast<int>(c) - 1; bit >= 0; --bit) {
        if (!(mask & (1u << bit))) continue;
        const Polynomial& entry = m(row, cols[bit]);
        const Polynomial& rest = table[mask & ~(1u << bit)];
        if (!entry.is_zero() && !rest.is_zero()) {
          Polynomial term = entry * rest;
          if (greater % 2) acc -= term;
          else acc += term;
        }
        ++greater;
      }
      table[mask] = std::move(acc);
    }
  }
  return table;
}

void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

std::vector<std::size_t> range(std::size_t n) {
  std::vector<std::size_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

int degree_of(const Polynomial& f) {
  auto d = f.homogeneous_degree();
  if (!d) throw Error("hypersurface equation is not homogeneous");
  return *d;
}

// Rational c with p = c·q, if any.
std::optional<Rational> proportion(const Polynomial& p, const Polynomial& q) {
  if (p.size() != q.size() || p.is_zero()) return std::nullopt;
  const Rational c = p.lead_coeff() / q.lead_coeff();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.terms()[i].mono != q.terms()[i].mono || p.terms()[i].coeff != c * q.terms()[i].coeff) return std::nullopt;
  return c;
}

std::optional<std::pair<int, Rational>> rank_and_constant(const Polynomial& det, const Polynomial& f,
                                                          const QuotientRing& base) {
  const Polynomial d = base.reduce(det);
  if (d.is_zero()) return std::nullopt;
  Polynomial power = Polynomial::constant(det.ring(), 1);
  const int df = degree_of(f);
  for (int r = 0; r * df <= d.total_degree(); ++r) {
    if (auto c = proportion(d, base.reduce(power))) return std::make_pair(r, *c);
    power *= f;
  }
  return std::nullopt;
}

}  // namespace

Polynomial determinant(const PolyMatrix& m) {
  if (!m.is_square()) throw Error("determinant of a non-square matrix");
  if (m.rows() == 0) return Polynomial::constant(m.ring(), 1);
  if (m.cols() > kMaxMinorCols) throw Error("matrix too large for determinant");
  auto table = minor_table(m, range(m.rows()), range(m.cols()), m.rows());
  return table.back();
}

std::vector<Polynomial> minors(const PolyMatrix& m, std::size_t size) {
  if (size == 0) return {Polynomial::constant(m.ring(), 1)};
  if (size > m.rows() || size > m.cols()) return {};
  if (m.cols() > kMaxMinorCols) throw Error("matrix too large for minors");
  std::vector<std::vector<std::size_t>> row_sets;
  subsets(m.rows(), size, row_sets);
  std::vector<std::vector<std::size_t>> col_sets;
  subsets(m.cols(), size, col_sets);
  std::vector<Polynomial> out;
  for (const auto& rows : row_sets) {
    auto table = minor_table(m, rows, range(m.cols()), size);
    for (const auto& cols : col_sets) {
      std::uint32_t mask = 0;
      for (auto j : cols) mask |= 1u << j;
      out.push_back(table[mask]);
    }
  }
  return out;
}

PolyMatrix adjugate(const PolyMatrix& m) {
  if (!m.is_square()) throw Error("adjugate of a non-square matrix");
  const std::size_t n = m.rows();
  PolyMatrix adj(m.ring(), n, n);
  if (n == 1) adj(0, 0) = Polynomial::constant(m.ring(), 1);
  if (n <= 1) return adj;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r)
      if (r != i) rows.push_back(r);
    auto table = minor_table(m, rows, range(n), n - 1);
    const std::uint32_t full = (1u << n) - 1;
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial cof = table[full & ~(1u << j)];
      if ((i + j) % 2) cof = -cof;
      adj(j, i) = std::move(cof);
    }
  }
  return adj;
}

GradedMatrix adjoint(const GradedMatrix& a) {
  if (a.rows() != a.cols()) throw Error("adjoint of a non-square matrix");
  int deg_det = 0;
  for (int d : a.col_deg()) deg_det += d;
  for (int d : a.row_deg()) deg_det -= d;
  std::vector<int> cols = a.row_deg();
  for (auto& d : cols) d += deg_det;
  return GradedMatrix(a.qring(), adjugate(a.entries()), a.col_deg(), std::move(cols));
}

std::optional<int> factorization_rank(const Polynomial& det, const Polynomial& f, const QuotientRing& base) {
  auto rc = rank_and_constant(det, f, base);
  if (!rc) return std::nullopt;
  return rc->first;
}

// ---------------------------------------------------------------- factorizations

VerifyReport mf_verify(const GradedMatrix& a, const GradedMatrix& b, const Polynomial& f, const QuotientRing& base) {
  VerifyReport report;
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) {
    report.failures.push_back("matrices must be square of equal size");
    return report;
  }
  const PolyMatrix target = PolyMatrix::identity(a.ring(), n).scaled(f);
  if ((a.entries() * b.entries() - target).reduced(base) != PolyMatrix(a.ring(), n, n))
    report.failures.push_back("A*B != f*Id");
  if ((b.entries() * a.entries() - target).reduced(base) != PolyMatrix(a.ring(), n, n))
    report.failures.push_back("B*A != f*Id");
  const int df = degree_of(f);
  // B may carry an overall shift relative to A.
  bool twists_ok = true;
  if (n > 0) {
    const int offset = b.row_deg()[0] - a.col_deg()[0];
    for (std::size_t i = 0; i < n && twists_ok; ++i)
      twists_ok = b.row_deg()[i] == a.col_deg()[i] + offset && b.col_deg()[i] == a.row_deg()[i] + df + offset;
  }
  if (!twists_ok) report.failures.push_back("twists of B do not match A");
  report.rank = factorization_rank(determinant(a.entries()), f, base);
  if (!report.rank) report.failures.push_back("det A is not a constant times a power of f");
  report.ok = report.failures.empty();
  return report;
}

GradedMatrix partner(const GradedMatrix& a, const Hypersurface& h) {
  if (a.rows() != a.cols()) throw Error("a factorization needs a square matrix");
  auto rc = rank_and_constant(determinant(a.entries()), h.f, *h.base);
  if (!rc) throw Error("det A is not a constant times a power of f");
  const auto [r, c] = *rc;
  const std::size_t n = a.rows();
  PolyMatrix adj = adjugate(a.entries());
  PolyMatrix b(a.ring(), n, n);
  const Rational inv = 1 / c;
  if (r == 0) {
    b = adj.scaled(h.f).reduced(*h.base);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = b(i, j).scaled(inv);
  } else {
    const Polynomial divisor = h.f.pow(static_cast<unsigned>(r - 1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = divide_exact(h.base->reduce(adj(i, j)), divisor).scaled(inv);
  }
  std::vector<int> cols = a.row_deg();
  for (auto& d : cols) d += degree_of(h.f);
  return GradedMatrix(a.qring(), std::move(b), a.col_deg(), std::move(cols));
}

MatrixFactorization make_factorization(const GradedMatrix& a, const Hypersurface& h) {
  MatrixFactorization mf;
  mf.A = a;
  mf.B = partner(a, h);
  mf.f = h.f;
  mf.base = h.base;
  mf.rank = *factorization_rank(determinant(a.entries()), h.f, *h.base);
  return mf;
}

MatrixFactorization mf_dual(const MatrixFactorization& mf) {
  MatrixFactorization d = mf;
  d.A = mf.A.transpose();
  d.B = mf.B.transpose().shifted(-degree_of(mf.f));
  return d;
}

MatrixFactorization mf_shift(const MatrixFactorization& mf, int k) {
  MatrixFactorization s = mf;
  s.A = mf.A.shifted(k);
  s.B = mf.B.shifted(k);
  return s;
}

MatrixFactorization mf_direct_sum(const MatrixFactorization& x, const MatrixFactorization& y) {
  if (x.base != y.base) throw RingMismatch();
  MatrixFactorization s = x;
  s.A = x.A.direct_sum(y.A);
  s.B = x.B.direct_sum(y.B);
  s.rank = x.rank + y.rank;
  return s;
}

MatrixFactorization mf_normalize(const MatrixFactorization& mf, int anchor) {
  if (mf.A.cols() == 0) return mf;
  const int lowest = *std::min_element(mf.A.col_deg().begin(), mf.A.col_deg().end());
  return mf_shift(mf, lowest - anchor);
}

// ---------------------------------------------------------------- invariants

Ideal fitting_ideal(const GradedMatrix& m, int k) {
  if (k < 0 || k > static_cast<int>(m.rows())) throw Error("Fitting index out of range");
  const std::size_t size = m.rows() - static_cast<std::size_t>(k);
  if (size == 0) return Ideal(m.qring(), {m.qring()->constant(1)});
  return Ideal(m.qring(), minors(m.entries(), size));
}

LocalFreeness locally_free_test(const GradedMatrix& m, int k) {
  const QRingPtr& q = m.qring();
  const RingPtr& ring = q->ring();
  auto y1 = ring->index_of("y1"), y2 = ring->index_of("y2"), y3 = ring->index_of("y3");
  if (!y1 || !y2 || !y3) throw Error("local freeness needs a ring with y1, y2, y3");
  if (k < 0 || k > static_cast<int>(m.rows())) throw Error("Fitting index out of range");
  const std::size_t size = m.rows() - static_cast<std::size_t>(k);
  const Polynomial zero(ring), one = Polynomial::constant(ring, 1);
  PolyMatrix at(ring, m.rows(), m.cols());
  bool numeric = true;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      at(i, j) = q->reduce(m(i, j).substitute(*y1, zero).substitute(*y2, zero).substitute(*y3, one));
      numeric = numeric && at(i, j).is_constant();
    }
  if (size == 0) return {LocalVerdict::LocallyFree, Ideal(q, {one})};
  if (numeric) {
    RationalMatrix values(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) values(i, j) = at(i, j).constant_value();
    if (rank(values) >= size) return {LocalVerdict::LocallyFree, Ideal(q, {one})};
    return {LocalVerdict::NotLocallyFree, Ideal(q, {})};
  }
  Ideal condition(q, minors(at, size));
  if (condition.is_unit()) return {LocalVerdict::LocallyFree, condition};
  if (condition.is_zero()) return {LocalVerdict::NotLocallyFree, condition};
  return {LocalVerdict::Conditional, condition};
}

namespace {

std::pair<std::vector<int>, std::vector<int>> normalized_twists(const GradedMatrix& m) {
  std::vector<int> rows = m.row_deg(), cols = m.col_deg();
  int lowest = 0;
  if (!rows.empty()) lowest = *std::min_element(rows.begin(), rows.end());
  for (auto& d : rows) d -= lowest;
  for (auto& d : cols) d -= lowest;
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  return {rows, cols};
}

}  // namespace

EquivalenceReport equivalence_invariants(const GradedMatrix& m1, const GradedMatrix& m2) {
  if (m1.qring() != m2.qring()) throw RingMismatch();
  const GradedMatrix a = prune(m1), b = prune(m2);
  if (a.rows() != b.rows() || a.cols() != b.cols()) return {Equivalence::Distinct, "sizes differ"};
  if (normalized_twists(a) != normalized_twists(b)) return {Equivalence::Distinct, "twist multisets differ"};
  for (int k = 0; k < static_cast<int>(a.rows()); ++k)
    if (!ideal_equal(fitting_ideal(a, k), fitting_ideal(b, k)))
      return {Equivalence::Distinct, "Fitt_" + std::to_string(k) + " differs"};
  return {Equivalence::Undetermined, "all invariants agree"};
}

std::string to_string(LocalVerdict v) {
  switch (v) {
    case LocalVerdict::LocallyFree: return "locallyFree";
    case LocalVerdict::NotLocallyFree: return "notLocallyFree";
    case LocalVerdict::Conditional: return "conditional";
  }
  return "";
}

}  // namespace mcm
