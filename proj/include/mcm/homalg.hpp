#pragma once

#include <vector>

#include "mcm/matfac.hpp"

namespace mcm {

/// Presentation of the double dual of Coker m: resolve mᵀ three steps, take the
/// last matrix, transpose and prune.
GradedMatrix reflexive_hull(const GradedMatrix& m);

/// Reflexive hull of Coker phi ⊗ Coker psi, presented by [Id ⊗ psi | phi ⊗ Id].
GradedMatrix tensor_cm(const GradedMatrix& phi, const GradedMatrix& psi);

/// The raw tensor presentation [Id ⊗ psi | phi ⊗ Id].
GradedMatrix tensor_presentation(const GradedMatrix& phi, const GradedMatrix& psi);

/// (y1, y2, y3), its syzygies and second syzygies over the nodal ring.
std::vector<GradedMatrix> maximal_ideal_resolution();

/// Factorization presenting the second syzygy of the maximal ideal, twisted by 3.
MatrixFactorization build_M2();

}  // namespace mcm
