#pragma once

#include <vector>

#include "mcm/matrix.hpp"

namespace mcm {

/// Generators of the kernel of `m` over the quotient ring.
///
/// The result is a minimal graded generating set when the grading is
/// positive. An empty kernel is represented by one zero column (the
/// convention used by the classical systems), and a map with zero target
/// has the identity as its syzygy matrix.
GradedMatrix syzygies(const GradedMatrix& m);

/// A generating subset of the columns of `m` (over the quotient ring),
/// minimal when the grading is positive; columns ordered by degree.
GradedMatrix minimize_columns(const GradedMatrix& m);

/// r[0] = minimized m, r[k] = syzygies(r[k-1]); `steps` matrices in total.
std::vector<GradedMatrix> resolve(const GradedMatrix& m, int steps);

/// Removes rows and columns through unit entries, pivoting on the first unit
/// in row-major order; drops zero columns, keeping one when all vanish.
GradedMatrix prune(const GradedMatrix& m);

/// A module given as the cokernel of its presentation matrix.
class PresentedModule {
 public:
  explicit PresentedModule(GradedMatrix presentation) : presentation_(prune(presentation)) {}
  const GradedMatrix& presentation() const { return presentation_; }
  std::size_t generators() const { return presentation_.rows(); }
  bool is_free() const { return presentation_.is_zero_mod(); }

 private:
  GradedMatrix presentation_;
};

}  // namespace mcm
