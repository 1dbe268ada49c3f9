#include "mcm/extsolver.hpp"

#include <unordered_map>

namespace mcm {

namespace {

bool is_parametric(const PolyRing& ring) {
  for (std::size_t i = 0; i < ring.nvars(); ++i)
    if (ring.weight(i) == 0) return true;
  return false;
}

std::vector<std::size_t> graded_variables(const PolyRing& ring) {
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < ring.nvars(); ++i)
    if (ring.weight(i) == 1) vars.push_back(i);
  return vars;
}

struct SlotKey {
  std::size_t row, col;
  Monomial mono;
  bool operator==(const SlotKey& o) const { return row == o.row && col == o.col && mono == o.mono; }
};

struct SlotHash {
  std::size_t operator()(const SlotKey& k) const { return k.mono.hash() ^ (k.row * 0x9e3779b97f4a7c15ULL) ^ (k.col << 20); }
};

using SlotIndex = std::unordered_map<SlotKey, std::size_t, SlotHash>;

// Appends the coefficients of each entry of m to `out`, indexing new slots on demand.
void scatter(const PolyMatrix& m, SlotIndex& index, std::vector<std::pair<std::size_t, Rational>>& out) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      for (const auto& t : m(r, c).terms()) {
        auto [it, inserted] = index.try_emplace(SlotKey{r, c, t.mono}, index.size());
        out.push_back({it->second, t.coeff});
      }
}

int degree_of(const Polynomial& f) {
  auto d = f.homogeneous_degree();
  if (!d) throw Error("hypersurface equation is not homogeneous");
  return *d;
}

PolyMatrix single_entry(const RingPtr& ring, std::size_t rows, std::size_t cols, std::size_t i, std::size_t j,
                        const Polynomial& p) {
  PolyMatrix m(ring, rows, cols);
  m(i, j) = p;
  return m;
}

}  // namespace

DegreeTemplate degree_template(const GradedMatrix& a, const GradedMatrix& b, int twist) {
  DegreeTemplate t(a.rows(), std::vector<int>(b.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) t[i][j] = b.col_deg()[j] - twist - a.row_deg()[i];
  return t;
}

bool all_negative(const DegreeTemplate& t) {
  for (const auto& row : t)
    for (int d : row)
      if (d >= 0) return false;
  return true;
}

ExtSolutionSpace solve_extensions(const ExtProblem& problem) {
  const GradedMatrix& a = problem.left.A;
  const GradedMatrix& a_partner = problem.left.B;
  const GradedMatrix b = problem.right.A.shifted(problem.twist);
  const GradedMatrix& b_partner = problem.right.B;
  const QRingPtr& q = a.qring();
  const RingPtr& ring = q->ring();
  if (b.qring() != q) throw RingMismatch();
  if (is_parametric(*ring)) throw Error("parametric factorizations need condext, not the dense solver");

  ExtSolutionSpace space;
  space.degrees = degree_template(a, b, 0);
  const std::size_t rows = a.rows(), cols = b.cols();
  const auto vars = graded_variables(*ring);

  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (const auto& mono : monomials_of_degree(*ring, vars, space.degrees[i][j]))
        space.unknowns.push_back({i, j, mono});
  const std::size_t n = space.unknowns.size();
  SlotIndex unknown_index;
  for (std::size_t u = 0; u < n; ++u)
    unknown_index.emplace(SlotKey{space.unknowns[u].row, space.unknowns[u].col, space.unknowns[u].mono}, u);

  // Condition system: one column per unknown, one row per coefficient of A'·D·B' in R.
  SlotIndex condition_index;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(n);
  for (std::size_t u = 0; u < n; ++u) {
    const auto& [i, j, mono] = space.unknowns[u];
    PolyMatrix image(ring, a_partner.rows(), b_partner.cols());
    for (std::size_t r = 0; r < a_partner.rows(); ++r) {
      if (a_partner(r, i).is_zero()) continue;
      const Polynomial left = a_partner(r, i).times_monomial(mono);
      for (std::size_t c = 0; c < b_partner.cols(); ++c)
        if (!b_partner(j, c).is_zero()) image(r, c) = q->reduce(left * b_partner(j, c));
    }
    scatter(image, condition_index, columns[u]);
  }
  RationalMatrix system(condition_index.size(), n);
  for (std::size_t u = 0; u < n; ++u)
    for (const auto& [row, c] : columns[u]) system(row, u) += c;
  space.condition_rank = rank(system);

  auto to_matrix = [&](const std::vector<Rational>& v) {
    PolyMatrix d(ring, rows, cols);
    for (std::size_t u = 0; u < n; ++u)
      if (v[u] != 0) d(space.unknowns[u].row, space.unknowns[u].col) += Polynomial::monomial(ring, space.unknowns[u].mono, v[u]);
    return d;
  };
  const auto solutions = n ? nullspace(system) : std::vector<std::vector<Rational>>{};
  for (const auto& v : solutions) space.solution_basis.push_back(to_matrix(v));

  // Trivial extensions: A·U and V·B for monomial matrices U, V of compatible degrees.
  std::vector<std::vector<Rational>> trivial;
  auto add_trivial = [&](const PolyMatrix& d) {
    std::vector<Rational> v(n);
    bool nonzero = false;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        for (const auto& t : d(i, j).terms()) {
          auto it = unknown_index.find(SlotKey{i, j, t.mono});
          if (it == unknown_index.end()) throw Error("trivial extension outside the degree template");
          v[it->second] += t.coeff;
          nonzero = true;
        }
    if (nonzero) trivial.push_back(std::move(v));
  };
  for (std::size_t l = 0; l < a.cols(); ++l)
    for (std::size_t j = 0; j < cols; ++j)
      for (const auto& mono : monomials_of_degree(*ring, vars, b.col_deg()[j] - a.col_deg()[l]))
        add_trivial(a.entries() * single_entry(ring, a.cols(), cols, l, j, Polynomial::monomial(ring, mono)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t l = 0; l < b.rows(); ++l)
      for (const auto& mono : monomials_of_degree(*ring, vars, b.row_deg()[l] - a.row_deg()[i]))
        add_trivial(single_entry(ring, rows, b.rows(), i, l, Polynomial::monomial(ring, mono)) * b.entries());

  Echelon triv = row_reduce([&] {
    RationalMatrix m(0, n);
    for (const auto& v : trivial) m.append_row(v);
    return m;
  }());
  const std::size_t trivial_rank = triv.pivot_cols.size();
  for (std::size_t k = 0; k < trivial_rank; ++k) space.trivial_basis.push_back(to_matrix(triv.reduced.row(k)));

  // Representatives: solutions that extend the trivial span.
  RationalMatrix span(0, n);
  for (std::size_t k = 0; k < trivial_rank; ++k) span.append_row(triv.reduced.row(k));
  std::size_t current = trivial_rank;
  for (const auto& v : solutions) {
    RationalMatrix trial = span;
    trial.append_row(v);
    const std::size_t r = rank(trial);
    if (r > current) {
      span = std::move(trial);
      current = r;
      space.representatives.push_back(to_matrix(v));
    }
  }
  if (current != solutions.size()) throw Error("trivial extensions do not lie in the solution space");
  space.quotient_dimension = static_cast<int>(solutions.size() - trivial_rank);
  return space;
}

std::vector<Rational> coordinates(const ExtSolutionSpace& space, const PolyMatrix& d) {
  SlotIndex index;
  for (std::size_t u = 0; u < space.unknowns.size(); ++u)
    index.emplace(SlotKey{space.unknowns[u].row, space.unknowns[u].col, space.unknowns[u].mono}, u);
  std::vector<Rational> v(space.unknowns.size());
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (const auto& t : d(i, j).terms()) {
        auto it = index.find(SlotKey{i, j, t.mono});
        if (it == index.end()) throw Error("matrix does not fit the degree template");
        v[it->second] = t.coeff;
      }
  return v;
}

bool satisfies_condition(const ExtProblem& problem, const PolyMatrix& d) {
  const QuotientRing& q = *problem.left.A.qring();
  return (problem.left.B.entries() * d * problem.right.B.entries()).reduced(q).is_zero();
}

MatrixFactorization build_extension(const ExtProblem& problem, const PolyMatrix& d) {
  const GradedMatrix& a = problem.left.A;
  const GradedMatrix& a_partner = problem.left.B;
  const GradedMatrix b = problem.right.A.shifted(problem.twist);
  const GradedMatrix& b_partner = problem.right.B;
  const QuotientRing& base = *problem.left.base;
  const Polynomial& f = problem.left.f;
  if (d.rows() != a.rows() || d.cols() != b.cols()) throw Error("D has the wrong size");

  const PolyMatrix g = (a_partner.entries() * d * b_partner.entries()).reduced(base);
  PolyMatrix c(a.ring(), g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      auto [quot, rem] = divide(g(i, j), f);
      if (!base.reduce(rem).is_zero()) throw Error("A'*D*B' does not vanish modulo f");
      c(i, j) = quot;
    }

  const std::size_t s = a.rows(), t = b.rows();
  PolyMatrix m = a.entries().hconcat(d).vconcat(PolyMatrix(a.ring(), t, s).hconcat(b.entries()));
  PolyMatrix mp = a_partner.entries().hconcat(-c).vconcat(PolyMatrix(a.ring(), t, s).hconcat(b_partner.entries()));
  std::vector<int> rows = a.row_deg(), cols = a.col_deg();
  rows.insert(rows.end(), b.row_deg().begin(), b.row_deg().end());
  cols.insert(cols.end(), b.col_deg().begin(), b.col_deg().end());
  std::vector<int> partner_cols = rows;
  for (auto& x : partner_cols) x += degree_of(f);

  MatrixFactorization out;
  out.A = GradedMatrix(a.qring(), std::move(m), rows, cols);
  out.B = GradedMatrix(a.qring(), std::move(mp), cols, std::move(partner_cols));
  out.f = f;
  out.base = problem.left.base;
  out.rank = problem.left.rank + problem.right.rank;
  return out;
}

int stability_dimension(const MatrixFactorization& mf) {
  if (is_parametric(*mf.A.ring())) throw Error("stability needs a numeric factorization");
  if (mf.rank == 0) throw Error("stability is undefined for free modules");
  if (locally_free_test(mf.A, mf.rank).verdict != LocalVerdict::LocallyFree)
    throw Error("stability needs a locally free module");
  return solve_extensions({mf, mf, 0}).quotient_dimension;
}

std::vector<TwistScan> scan_twists(const MatrixFactorization& left, const MatrixFactorization& right, int low,
                                   int high) {
  std::vector<TwistScan> out;
  for (int k = low; k <= high; ++k) {
    ExtProblem p{left, right, k};
    if (all_negative(degree_template(left.A, right.A.shifted(k), 0))) {
      out.push_back({k, 0, true});
      continue;
    }
    out.push_back({k, solve_extensions(p).quotient_dimension, false});
  }
  return out;
}

// ---------------------------------------------------------------- parametric conditions

std::vector<Polynomial> simplify_generators(const std::vector<Polynomial>& gens,
                                            const std::vector<std::string>& variables) {
  if (gens.empty()) return {};
  const RingPtr& ring = gens.front().ring();
  std::vector<std::size_t> vars;
  for (const auto& v : variables) vars.push_back(ring->require_index(v));
  std::vector<Polynomial> out;
  for (const auto& g : gens)
    if (!g.is_zero()) out.push_back(strip_monomial_factors(g, vars));
  return out;
}

std::vector<Polynomial> condext(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& d,
                                const QuotientRing& ring, const CondextOptions& options) {
  const PolyMatrix g = adjugate(a) * d * adjugate(b);
  const std::size_t var = ring.ring()->require_index(options.split_variable);
  std::vector<Polynomial> coefficients;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      for (auto& [power, coeff] : coeff_split(ring.reduce(g(i, j)), var)) coefficients.push_back(std::move(coeff));
  return simplify_generators(interreduce(coefficients, &ring), options.strip_variables);
}

Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& values) {
  const RingPtr& ring = p.ring();
  std::vector<std::pair<std::size_t, const Polynomial*>> subs;
  for (const auto& [name, value] : values) subs.push_back({ring->require_index(name), &value});
  Polynomial out(ring);
  for (const auto& t : p.terms()) {
    Monomial rest = t.mono;
    Polynomial factor = Polynomial::constant(ring, t.coeff);
    for (const auto& [v, value] : subs) {
      if (t.mono[v] == 0) continue;
      rest.set(v, 0);
      factor *= value->map_to(ring).pow(t.mono[v]);
    }
    out += factor.times_monomial(rest);
  }
  return out;
}

PolyMatrix substitute(const PolyMatrix& m, const std::map<std::string, Polynomial>& values) {
  PolyMatrix out(m.ring(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = substitute(m(i, j), values);
  return out;
}

}  // namespace mcm
