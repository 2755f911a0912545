#include "subclust/selfexpress.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace subclust {

CoefficientMatrix omp_coefficients(const DataMatrix& x, int k_max,
                                   double residual_tol) {
  const Index n = x.points();
  if (k_max < 1 || Index(k_max) > n - 1) {
    throw std::invalid_argument("omp_coefficients: k_max must be in [1, N-1]");
  }
  if (residual_tol < 0.0) {
    throw std::invalid_argument("omp_coefficients: residual_tol must be >= 0");
  }

  const Matrix& d = x.values;
  Matrix c = Matrix::Zero(n, n);

#pragma omp parallel for schedule(dynamic)
  for (Index j = 0; j < n; ++j) {
    const Vector target = d.col(j);
    Vector residual = target;
    std::vector<Index> support;
    support.reserve(static_cast<std::size_t>(k_max));
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    used[static_cast<std::size_t>(j)] = 1;

    Vector coeffs;
    while (Index(support.size()) < Index(k_max) && residual.norm() > residual_tol) {
      // most correlated unused column; lowest index wins ties
      Index best = -1;
      double best_corr = -1.0;
      const Vector corr = d.transpose() * residual;
      for (Index i = 0; i < n; ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        const double a = std::abs(corr[i]);
        if (a > best_corr) {
          best_corr = a;
          best = i;
        }
      }
      if (best < 0 || best_corr <= 1e-12) break;

      support.push_back(best);
      used[static_cast<std::size_t>(best)] = 1;

      Matrix sub(d.rows(), Index(support.size()));
      for (Index s = 0; s < Index(support.size()); ++s) {
        sub.col(s) = d.col(support[static_cast<std::size_t>(s)]);
      }
      coeffs = sub.colPivHouseholderQr().solve(target);
      residual = target - sub * coeffs;
    }

    for (Index s = 0; s < Index(support.size()); ++s) {
      c(support[static_cast<std::size_t>(s)], j) = coeffs[s];
    }
  }

  return CoefficientMatrix(std::move(c));
}

CoefficientMatrix lsr_coefficients(const DataMatrix& x, double lambda) {
  if (lambda <= 0.0) {
    throw std::invalid_argument("lsr_coefficients: lambda must be > 0");
  }
  const Index n = x.points();
  const Matrix& d = x.values;

  Matrix gram = d.transpose() * d;
  gram.diagonal().array() += lambda;
  const Matrix p = gram.llt().solve(Matrix::Identity(n, n));

  // column j of the constrained solution: c_j = e_j - p_j / p_jj, which has an
  // exact zero at position j
  Matrix c(n, n);
  for (Index j = 0; j < n; ++j) {
    const double pjj = p(j, j);
    c.col(j) = -p.col(j) / pjj;
    c(j, j) = 0.0;
  }
  return CoefficientMatrix(std::move(c));
}

AffinityResult build_affinity(const CoefficientMatrix& c, AffinityMode mode) {
  const Index n = c.size();
  Matrix w(n, n);
  const Matrix& m = c.values;
  for (Index j = 0; j < n; ++j) {
    w(j, j) = 0.0;
    for (Index i = j + 1; i < n; ++i) {
      double v = std::abs(m(i, j)) + std::abs(m(j, i));
      if (mode == AffinityMode::kHalf) v *= 0.5;
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  // rescale so the largest weight is exactly 1; keeps symmetry, unlike
  // per-column normalization
  const double top = w.maxCoeff();
  const bool all_zero = (top == 0.0);
  if (!all_zero) w /= top;
  return {AffinityMatrix(std::move(w)), all_zero};
}

RepresentationSolver make_omp_solver(int k_max, double residual_tol) {
  return [k_max, residual_tol](const DataMatrix& x) {
    return omp_coefficients(x, k_max, residual_tol);
  };
}

RepresentationSolver make_lsr_solver(double lambda) {
  return [lambda](const DataMatrix& x) { return lsr_coefficients(x, lambda); };
}

}  // namespace subclust
