#pragma once

#include <vector>

#include "subclust/types.hpp"

namespace subclust {

// Column assigned to each row of a square cost matrix, minimizing total cost
// (Hungarian algorithm, O(n^3) potentials form).
std::vector<int> hungarian_min_assignment(const Matrix& cost);

// Fraction of points matched under the best pairing of predicted to true
// clusters.
double clustering_accuracy(const LabelVector& pred, const LabelVector& truth);

enum class NmiNorm {
  kSqrt,        // I / sqrt(H(pred) * H(truth))
  kArithmetic,  // I / ((H(pred) + H(truth)) / 2)
};

// Normalized mutual information, natural logs. Two constant labelings agree
// perfectly (1.0); exactly one constant labeling carries no information (0.0).
double nmi(const LabelVector& pred, const LabelVector& truth,
           NmiNorm norm = NmiNorm::kSqrt);

enum class ConnectivityScope {
  kPerCluster,  // min over ground-truth clusters of lambda_2 of the subgraph
  kWholeGraph,  // lambda_2 of the whole graph
};

// Second-smallest normalized-Laplacian eigenvalue, per the scope above.
// Single-vertex (sub)graphs count as fully connected: lambda_2 = 1.
double connectivity(const AffinityMatrix& w, const LabelVector& truth,
                    ConnectivityScope scope = ConnectivityScope::kPerCluster);

// Sum over clusters of cut(A, complement) / vol(A). A zero-volume cluster
// contributes 0 (its cut is necessarily 0 too).
double ncut_value(const AffinityMatrix& w, const LabelVector& labels);

// Fraction of off-diagonal entries with |m| <= zero_floor.
double sparsity(const Matrix& m, double zero_floor = 1e-15);

}  // namespace subclust
