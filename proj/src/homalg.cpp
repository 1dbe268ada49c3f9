#include "mcm/homalg.hpp"

#include "mcm/modres.hpp"

namespace mcm {

GradedMatrix reflexive_hull(const GradedMatrix& m) {
  const auto steps = resolve(m.transpose(), 3);
  return prune(steps[2].transpose());
}

GradedMatrix tensor_presentation(const GradedMatrix& phi, const GradedMatrix& psi) {
  if (phi.qring() != psi.qring()) throw RingMismatch();
  const RingPtr& ring = phi.ring();
  const std::size_t s = phi.rows(), q = psi.rows();
  PolyMatrix left = PolyMatrix::identity(ring, s).kron(psi.entries());
  PolyMatrix right = phi.entries().kron(PolyMatrix::identity(ring, q));
  std::vector<int> rows, cols;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t k = 0; k < q; ++k) rows.push_back(phi.row_deg()[i] + psi.row_deg()[k]);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t k = 0; k < psi.cols(); ++k) cols.push_back(phi.row_deg()[i] + psi.col_deg()[k]);
  for (std::size_t j = 0; j < phi.cols(); ++j)
    for (std::size_t k = 0; k < q; ++k) cols.push_back(phi.col_deg()[j] + psi.row_deg()[k]);
  return GradedMatrix(phi.qring(), left.hconcat(right), std::move(rows), std::move(cols));
}

GradedMatrix tensor_cm(const GradedMatrix& phi, const GradedMatrix& psi) {
  return reflexive_hull(tensor_presentation(phi, psi));
}

std::vector<GradedMatrix> maximal_ideal_resolution() {
  const auto& h = nodal();
  GradedMatrix gens(h.ring, PolyMatrix::parse(h.ring->ring(), "y1, y2, y3"), {0}, {1, 1, 1});
  return resolve(gens, 3);
}

MatrixFactorization build_M2() {
  const auto& h = nodal();
  const GradedMatrix third = maximal_ideal_resolution()[2];
  GradedMatrix c = syzygies(third.transpose()).transpose();
  return mf_normalize(make_factorization(c, h), 2);
}

}  // namespace mcm
