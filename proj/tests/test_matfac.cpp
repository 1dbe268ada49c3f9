#include "doctest.h"
#include "mcm/linalg.hpp"
#include "mcm/matfac.hpp"
#include "mcm/modres.hpp"
#include "support.hpp"

using namespace mcm;

namespace {

const Hypersurface& R() { return nodal(); }

GradedMatrix graded(const Hypersurface& h, std::string_view text, std::vector<int> rows, std::vector<int> cols) {
  return GradedMatrix(h.ring, PolyMatrix::parse(h.ring->ring(), text), std::move(rows), std::move(cols));
}

Polynomial poly(const Hypersurface& h, std::string_view text) { return h.ring->parse(text); }

// phi_lambda with the coordinates given as polynomial text.
GradedMatrix phi(const Hypersurface& h, const std::string& l1, const std::string& l2) {
  const std::string text = "y1-(" + l1 + ")*y3, y2*y3+(" + l2 + ")*y3^2; y2-(" + l2 + ")*y3, y1^2+((" + l1 +
                           ")+1)*y1*y3+((" + l1 + ")^2+(" + l1 + "))*y3^2";
  return graded(h, text, {1, 1}, {2, 3});
}

GradedMatrix psi(const Hypersurface& h, const std::string& l1, const std::string& l2) {
  const std::string text = "y1^2+((" + l1 + ")+1)*y1*y3+((" + l1 + ")^2+(" + l1 + "))*y3^2, -(y2*y3+(" + l2 +
                           ")*y3^2); -(y2-(" + l2 + ")*y3), y1-(" + l1 + ")*y3";
  return graded(h, text, {0, 1}, {2, 2});
}

GradedMatrix alpha(const Hypersurface& h, const std::string& l1, const std::string& l2) {
  const std::string text = "0, y1-(" + l1 + ")*y3, y2-(" + l2 + ")*y3; y1, y2+(" + l2 + ")*y3, ((" + l1 + ")^2+(" +
                           l1 + "))*y3; y3, 0, -y1-((" + l1 + ")+1)*y3";
  return graded(h, text, {1, 1, 1}, {2, 2, 2});
}

GradedMatrix phi_inf() { return graded(R(), "y1+y3, y2^2; y3, y1^2", {1, 1}, {2, 3}); }

bool same_ideal(const Ideal& i, const Hypersurface& h, const std::vector<std::string>& gens) {
  std::vector<Polynomial> g;
  for (const auto& s : gens) g.push_back(poly(h, s));
  return ideal_equal(i, Ideal(h.ring, g));
}

PolyMatrix random_unimodular(std::mt19937& rng, const RingPtr& ring, std::size_t n) {
  // Product of a random unit lower and a random unit upper triangular matrix
  // with nonzero diagonal scalars.
  PolyMatrix lower = PolyMatrix::identity(ring, n), upper = PolyMatrix::identity(ring, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i > j) lower(i, j) = Polynomial::constant(ring, testing::random_rational(rng));
      if (i < j) upper(i, j) = Polynomial::constant(ring, testing::random_rational(rng));
      if (i == j) upper(i, j) = Polynomial::constant(ring, testing::random_nonzero(rng));
    }
  return lower * upper;
}

}  // namespace

TEST_CASE("curve points") {
  CHECK(CurvePoint::xi().kind() == CurvePoint::Kind::Affine);
  CHECK(CurvePoint::affine(0, 0) == CurvePoint::singular());
  CHECK_THROWS_AS(CurvePoint::affine(1, 1), Error);
  CHECK(CurvePoint::parse("3,6") == CurvePoint::affine(3, 6));
  CHECK(CurvePoint::parse("-3/4,-3/8").l2() == Rational(-3, 8));
  CHECK(CurvePoint::parse("inf").kind() == CurvePoint::Kind::Infinity);
  CHECK_THROWS_AS(CurvePoint::infinity().first(R().ring->ring()), Error);
}

TEST_CASE("mf_verify examples") {
  auto p = phi(R(), "-1", "0"), q = psi(R(), "-1", "0");
  CHECK(p.entries() == PolyMatrix::parse(R().ring->ring(), "y1+y3, y2*y3; y2, y1^2"));
  VerifyReport rep = mf_verify(p, q, R().f, *R().base);
  CHECK(rep.ok);
  CHECK(rep.rank == 1);
  CHECK(mf_verify(q, p.shifted(-1), R().f, *R().base).ok);

  auto a = alpha(R(), "-1", "0");
  auto b = adjoint(a);
  VerifyReport ra = mf_verify(a, b, R().f, *R().base);
  CHECK(ra.ok);
  CHECK(ra.rank == 1);

  auto id = GradedMatrix(R().ring, PolyMatrix::identity(R().ring->ring(), 2), {0, 0}, {0, 0});
  auto fid = GradedMatrix(R().ring, PolyMatrix::identity(R().ring->ring(), 2).scaled(R().f), {0, 0}, {3, 3});
  VerifyReport rf = mf_verify(id, fid, R().f, *R().base);
  CHECK(rf.ok);
  CHECK(rf.rank == 0);

  CHECK(!mf_verify(p, p, R().f, *R().base).ok);
}

TEST_CASE("adjoint examples") {
  auto phis = graded(R(), "y1, y2*y3; y2, y1^2+y1*y3", {1, 1}, {2, 3});
  auto adj = adjoint(phis);
  CHECK(adj.entries() == PolyMatrix::parse(R().ring->ring(), "y1^2+y1*y3, -y2*y3; -y2, y1"));
  auto id3 = GradedMatrix(R().ring, PolyMatrix::identity(R().ring->ring(), 3), {0, 0, 0}, {0, 0, 0});
  CHECK(adjoint(id3) == id3);
}

TEST_CASE("parametric factorizations") {
  const auto& P = parametric();
  auto a = alpha(P, "a", "b");
  MatrixFactorization mf = make_factorization(a, P);
  CHECK(mf.rank == 1);
  CHECK(mf.verify().ok);
  auto p = phi(P, "a", "b");
  CHECK(mf_verify(p, psi(P, "a", "b"), P.f, *P.base).ok);
}

TEST_CASE("dual and shift") {
  MatrixFactorization mf = make_factorization(phi(R(), "-1", "0"), R());
  MatrixFactorization dd = mf_dual(mf_dual(mf));
  CHECK(dd.A == mf.A);
  CHECK(dd.B == mf.B);
  MatrixFactorization d = mf_dual(mf);
  CHECK(d.verify().ok);
  CHECK(equivalence_invariants(d.A, psi(R(), "-1", "0")).verdict == Equivalence::Undetermined);

  auto id = GradedMatrix(R().ring, PolyMatrix::identity(R().ring->ring(), 1), {0}, {0});
  MatrixFactorization free = make_factorization(id, R());
  CHECK(free.rank == 0);
  CHECK(mf_dual(free).verify().ok);
  CHECK(prune(mf_dual(free).A).rows() == 0);

  CHECK(mf_shift(mf, 0) == mf);
  CHECK(mf_shift(mf_shift(mf, 2), -2) == mf);
  MatrixFactorization a = make_factorization(alpha(R(), "-1", "0"), R());
  // Tensoring with R(k) turns the source R(-2)^3 into R(k-2)^3.
  for (int k : {-3, 0, 4}) {
    MatrixFactorization shifted = mf_shift(a, k);
    for (int d : shifted.A.col_deg()) CHECK(-d == k - 2);
  }
  CHECK(mf_normalize(mf_shift(a, 5)).A.col_deg() == std::vector<int>{0, 0, 0});
}

TEST_CASE("Fitting ideal golden values") {
  CHECK(same_ideal(fitting_ideal(phi(R(), "-1", "0"), 1), R(), {"y1+y3", "y2", "y3^2"}));
  CHECK(same_ideal(fitting_ideal(psi(R(), "-1", "0"), 1), R(), {"y1+y3", "y2", "y3^2"}));
  CHECK(same_ideal(fitting_ideal(phi(R(), "3", "6"), 1), R(), {"y1-3*y3", "y2-6*y3", "y3^2"}));
  CHECK(same_ideal(fitting_ideal(phi_inf(), 1), R(), {"y1", "y3", "y2^2"}));
  CHECK(same_ideal(fitting_ideal(phi(R(), "0", "0"), 1), R(), {"y1", "y2"}));
  CHECK(same_ideal(fitting_ideal(psi(R(), "0", "0"), 1), R(), {"y1", "y2"}));
  CHECK(same_ideal(fitting_ideal(phi(R(), "8", "24"), 1), R(), {"y1-8*y3", "y2-24*y3", "y3^2"}));
  CHECK(same_ideal(fitting_ideal(psi(R(), "-3/4", "-3/8"), 1), R(), {"y1+3/4*y3", "y2+3/8*y3", "y3^2"}));

  auto zero = GradedMatrix(R().ring, PolyMatrix(R().ring->ring(), 2, 2), {0, 0}, {1, 1});
  CHECK(fitting_ideal(zero, 0).is_zero());
  CHECK(fitting_ideal(zero, 2).is_unit());
  CHECK_THROWS_AS(fitting_ideal(zero, 3), Error);
}

TEST_CASE("local freeness") {
  CHECK(locally_free_test(phi(R(), "0", "0"), 1).verdict == LocalVerdict::NotLocallyFree);
  CHECK(locally_free_test(psi(R(), "0", "0"), 1).verdict == LocalVerdict::NotLocallyFree);
  CHECK(locally_free_test(phi(R(), "-1", "0"), 1).verdict == LocalVerdict::LocallyFree);
  CHECK(locally_free_test(alpha(R(), "-1", "0"), 1).verdict == LocalVerdict::LocallyFree);
  CHECK(locally_free_test(alpha(R(), "0", "0"), 1).verdict == LocalVerdict::NotLocallyFree);
  CHECK(locally_free_test(phi_inf(), 1).verdict == LocalVerdict::LocallyFree);

  // Symbolic point: locally free exactly away from a = b = 0.
  const auto& P = parametric();
  LocalFreeness lf = locally_free_test(alpha(P, "a", "b"), 1);
  CHECK(lf.verdict == LocalVerdict::Conditional);
  CHECK(same_ideal(lf.condition, P, {"a", "b"}));
}

TEST_CASE("parametric local freeness of the six-generated framework") {
  RingPtr ring = PolyRing::make({"y1", "y2", "y3", "a5", "a9"}, {3, 2}, {1, 1, 1, 0, 0});
  Hypersurface h = make_hypersurface(ring);
  for (int m = 1; m <= 3; ++m) {
    const std::string t = "y3^" + std::to_string(m);
    const std::string text = "0, y1, y2, 0, a9*" + t + ", -a5*" + t + ";" +
                             "y1, y2, 0, 0, a5*" + t + ", -a9*" + t + ";" +
                             "y3, 0, -y1-y3, 0, 0, a9*" + t + ";" +
                             "0, 0, 0, 0, y1, y2; 0, 0, 0, y1, y2, 0; 0, 0, 0, y3, 0, -y1-y3";
    GradedMatrix s(h.ring, PolyMatrix::parse(ring, text), {1, 1, 1, m, m, m},
                   {2, 2, 2, 1 + m, 1 + m, 1 + m});
    LocalFreeness lf = locally_free_test(s, 2);
    CHECK(lf.verdict == LocalVerdict::Conditional);
    CHECK(ideal_equal(lf.condition, Ideal(h.ring, {h.ring->parse("a5^2-a9^2")})));
  }
}

TEST_CASE("equivalence invariants") {
  CHECK(equivalence_invariants(phi(R(), "-1", "0"), phi(R(), "3", "6")).verdict == Equivalence::Distinct);
  CHECK(equivalence_invariants(phi(R(), "-1", "0"), psi(R(), "-1", "0")).verdict == Equivalence::Distinct);
  CHECK(equivalence_invariants(phi(R(), "8", "24"), phi(R(), "8", "24")).verdict == Equivalence::Undetermined);
}

TEST_CASE("property: adjugate identity on random homogeneous matrices") {
  std::mt19937 rng(41);
  auto ring = R().ring->ring();
  for (int k = 0; k < 100; ++k) {
    std::uniform_int_distribution<int> size(1, 4), deg(0, 2);
    const int n = size(rng);
    std::vector<int> rows(n), cols(n);
    for (auto& d : rows) d = deg(rng);
    for (auto& d : cols) d = deg(rng) + 1;
    PolyMatrix m(ring, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (cols[j] >= rows[i]) m(i, j) = testing::random_homogeneous(rng, ring, cols[j] - rows[i], 0.5);
    PolyMatrix adj = adjugate(m);
    PolyMatrix expect = PolyMatrix::identity(ring, n).scaled(determinant(m));
    CHECK(m * adj == expect);
    CHECK(adj * m == expect);
  }
}

TEST_CASE("property: Fitting ideals are invariant under constant unimodular transforms") {
  std::mt19937 rng(42);
  std::vector<GradedMatrix> fixtures{phi(R(), "-1", "0"), psi(R(), "3", "6"), alpha(R(), "-1", "0"),
                                     alpha(R(), "0", "0"), phi_inf()};
  auto ring = R().ring->ring();
  for (int k = 0; k < 100; ++k) {
    const GradedMatrix& m = fixtures[static_cast<std::size_t>(k) % fixtures.size()];
    // Constant transforms must respect the grading: mix only rows (columns) of equal twist.
    PolyMatrix u = PolyMatrix::identity(ring, m.rows()), v = PolyMatrix::identity(ring, m.cols());
    PolyMatrix ur = random_unimodular(rng, ring, m.rows()), vr = random_unimodular(rng, ring, m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.rows(); ++j)
        if (m.row_deg()[i] == m.row_deg()[j]) u(i, j) = ur(i, j);
    for (std::size_t i = 0; i < m.cols(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m.col_deg()[i] == m.col_deg()[j]) v(i, j) = vr(i, j);
    if (determinant(u).is_zero() || determinant(v).is_zero()) continue;
    GradedMatrix t(R().ring, u * m.entries() * v, m.row_deg(), m.col_deg());
    for (int i = 0; i <= static_cast<int>(m.rows()); ++i) CHECK(ideal_equal(fitting_ideal(m, i), fitting_ideal(t, i)));
    CHECK(equivalence_invariants(m, t).verdict == Equivalence::Undetermined);
  }
}

TEST_CASE("property: split unit blocks leave Fitting ideals unchanged") {
  std::mt19937 rng(43);
  std::vector<GradedMatrix> fixtures{phi(R(), "-1", "0"), alpha(R(), "0", "0"), phi_inf()};
  auto ring = R().ring->ring();
  for (int k = 0; k < 100; ++k) {
    const GradedMatrix& m = fixtures[static_cast<std::size_t>(k) % fixtures.size()];
    std::uniform_int_distribution<int> count(1, 2);
    const int c = count(rng);
    GradedMatrix unit(R().ring, PolyMatrix::identity(ring, c).scaled(Polynomial::constant(ring, testing::random_nonzero(rng))),
                      std::vector<int>(c, 0), std::vector<int>(c, 0));
    GradedMatrix sum = unit.direct_sum(m);
    GradedMatrix pruned = prune(sum);
    CHECK(pruned.rows() == m.rows());
    for (int i = 0; i <= static_cast<int>(m.rows()); ++i) {
      CHECK(ideal_equal(fitting_ideal(sum, i), fitting_ideal(m, i)));
      CHECK(ideal_equal(fitting_ideal(pruned, i), fitting_ideal(m, i)));
    }
  }
}

TEST_CASE("property: rank is additive under direct sums") {
  std::vector<MatrixFactorization> mfs{make_factorization(phi(R(), "-1", "0"), R()),
                                       make_factorization(alpha(R(), "3", "6"), R()),
                                       make_factorization(psi(R(), "0", "0"), R())};
  std::mt19937 rng(44);
  std::uniform_int_distribution<int> shift(-3, 3);
  int checked = 0;
  for (int rep = 0; rep < 12; ++rep)
    for (const auto& x : mfs)
      for (const auto& y : mfs) {
        MatrixFactorization s = mf_direct_sum(mf_shift(x, shift(rng)), mf_shift(y, shift(rng)));
        VerifyReport r = s.verify();
        CHECK(r.ok);
        CHECK(r.rank == x.rank + y.rank);
        ++checked;
      }
  CHECK(checked >= 100);
}

TEST_CASE("dense linear algebra") {
  RationalMatrix m(2, 3);
  m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
  m(1, 0) = 2; m(1, 1) = 4; m(1, 2) = 6;
  CHECK(rank(m) == 1);
  auto ns = nullspace(m);
  CHECK(ns.size() == 2);
  for (const auto& v : ns) CHECK(v[0] + 2 * v[1] + 3 * v[2] == 0);
}
