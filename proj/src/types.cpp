#include "subclust/types.hpp"

#include <cmath>
#include <stdexcept>

namespace subclust {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square and nonempty");
  }
}

}  // namespace

DataMatrix::DataMatrix(Matrix v) : values(std::move(v)) {
  require(values.rows() >= 1, "DataMatrix: ambient dimension must be >= 1");
  require(values.cols() >= 2, "DataMatrix: need at least 2 points");
  require(values.allFinite(), "DataMatrix: entries must be finite");
}

LabelVector::LabelVector(Eigen::VectorXi l, int num_clusters)
    : labels(std::move(l)), k(num_clusters) {
  require(k >= 1, "LabelVector: k must be >= 1");
  for (Index i = 0; i < labels.size(); ++i) {
    require(labels[i] >= 0 && labels[i] < k, "LabelVector: label out of [0, k)");
  }
}

CoefficientMatrix::CoefficientMatrix(Matrix v) : values(std::move(v)) {
  require_square(values, "CoefficientMatrix");
  require(values.allFinite(), "CoefficientMatrix: entries must be finite");
  for (Index i = 0; i < values.rows(); ++i) {
    require(values(i, i) == 0.0, "CoefficientMatrix: diagonal must be exactly zero");
  }
}

AffinityMatrix::AffinityMatrix(Matrix v) : values(std::move(v)) {
  require_square(values, "AffinityMatrix");
  const Index n = values.rows();
  for (Index j = 0; j < n; ++j) {
    require(values(j, j) == 0.0, "AffinityMatrix: diagonal must be zero");
    for (Index i = 0; i < n; ++i) {
      const double w = values(i, j);
      require(std::isfinite(w) && w >= 0.0, "AffinityMatrix: entries must be finite and nonnegative");
      require(w == values(j, i), "AffinityMatrix: matrix must be symmetric");
    }
  }
}

DistanceMatrix::DistanceMatrix(Matrix v) : values(std::move(v)) {
  require_square(values, "DistanceMatrix");
  const Index n = values.rows();
  for (Index j = 0; j < n; ++j) {
    require(values(j, j) == 0.0, "DistanceMatrix: diagonal must be zero");
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double d = values(i, j);
      require(d > 0.0, "DistanceMatrix: off-diagonal entries must be positive or +inf");
      require(d == values(j, i), "DistanceMatrix: matrix must be symmetric");
    }
  }
}

Embedding::Embedding(Matrix v) : values(std::move(v)) {
  require(values.rows() >= 1 && values.cols() >= 1, "Embedding: must be nonempty");
  require(values.allFinite(), "Embedding: entries must be finite");
  for (Index i = 0; i < values.rows(); ++i) {
    const double n = values.row(i).norm();
    require(n == 0.0 || std::abs(n - 1.0) <= 1e-9, "Embedding: nonzero rows must be unit-normalized");
  }
}

}  // namespace subclust
