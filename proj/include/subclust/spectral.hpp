#pragma once

#include <cstdint>

#include "subclust/types.hpp"

namespace subclust {

// L = I - D^{-1/2} W D^{-1/2}, assembled entrywise so it is exactly
// symmetric. Isolated vertices (degree 0) get an identity row.
Matrix normalized_laplacian(const AffinityMatrix& w);

// Eigenvectors of the k smallest Laplacian eigenvalues, rows unit-normalized
// (zero rows left alone). Requires 2 <= k <= N.
Embedding spectral_embed(const AffinityMatrix& w, int k);

struct KmeansResult {
  LabelVector labels;
  double wcss = 0.0;
  // set when the data could not support k separated clusters (duplicate
  // centroids, failed empty-cluster repair, all-zero affinity upstream)
  bool degenerate = false;
  int iterations = 0;
};

// k-means++ seeding, Lloyd iterations capped at 300 or relative WCSS change
// below 1e-9, best of `restarts` runs. Deterministic for a fixed seed. Empty
// clusters are repaired by re-seeding with the farthest point of any cluster
// that can spare one.
KmeansResult kmeans(const Embedding& e, int k, std::uint64_t seed,
                    int restarts);

KmeansResult spectral_clustering(const AffinityMatrix& w, int k,
                                 std::uint64_t seed, int restarts = 10);

}  // namespace subclust
