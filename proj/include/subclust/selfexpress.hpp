#pragma once

#include <functional>

#include "subclust/types.hpp"

namespace subclust {

// Greedy orthogonal matching pursuit, one column at a time. Each point is
// approximated by at most k_max others (never itself); stops early when the
// residual drops below residual_tol.
CoefficientMatrix omp_coefficients(const DataMatrix& x, int k_max,
                                   double residual_tol = 1e-6);

// Least-squares representation with ridge penalty lambda and a hard zero
// diagonal, via the closed-form solution of the constrained problem.
CoefficientMatrix lsr_coefficients(const DataMatrix& x, double lambda);

enum class AffinityMode {
  kSum,   // w_ij = |c_ij| + |c_ji|
  kHalf,  // w_ij = (|c_ij| + |c_ji|) / 2
};

struct AffinityResult {
  AffinityMatrix matrix;
  bool all_zero = false;  // true when C had no nonzero off-diagonal at all
};

AffinityResult build_affinity(const CoefficientMatrix& c,
                              AffinityMode mode = AffinityMode::kSum);

using RepresentationSolver = std::function<CoefficientMatrix(const DataMatrix&)>;

RepresentationSolver make_omp_solver(int k_max, double residual_tol = 1e-6);
RepresentationSolver make_lsr_solver(double lambda);

}  // namespace subclust
