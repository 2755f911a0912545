#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>

namespace subclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// D x N point set; each column is one data point in ambient space.
/// Requires D >= 1, N >= 2, all entries finite.
struct DataMatrix {
  Matrix values;

  DataMatrix() = default;
  explicit DataMatrix(Matrix v);

  Index dim() const { return values.rows(); }
  Index points() const { return values.cols(); }
};

/// Cluster assignment for N points; every label lies in [0, k).
struct LabelVector {
  Eigen::VectorXi labels;
  int k = 0;

  LabelVector() = default;
  LabelVector(Eigen::VectorXi l, int num_clusters);

  Index size() const { return labels.size(); }
};

/// N x N self-expression coefficients; column j expresses point j in terms
/// of the other columns. Diagonal is exactly zero.
struct CoefficientMatrix {
  Matrix values;

  CoefficientMatrix() = default;
  explicit CoefficientMatrix(Matrix v);

  Index size() const { return values.rows(); }
};

/// N x N symmetric nonnegative weights with zero diagonal.
struct AffinityMatrix {
  Matrix values;

  AffinityMatrix() = default;
  explicit AffinityMatrix(Matrix v);

  Index size() const { return values.rows(); }
};

/// N x N symmetric simulated distances: zero diagonal, off-diagonal entries
/// strictly positive or +infinity.
struct DistanceMatrix {
  Matrix values;

  DistanceMatrix() = default;
  explicit DistanceMatrix(Matrix v);

  Index size() const { return values.rows(); }
};

/// N x k spectral embedding; row i is the embedded point i. Rows with
/// nonzero norm are unit-normalized.
struct Embedding {
  Matrix values;

  Embedding() = default;
  explicit Embedding(Matrix v);

  Index points() const { return values.rows(); }
  Index dim() const { return values.cols(); }
};

}  // namespace subclust
