#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subclust/types.hpp"

namespace subclust {

/// Parameters of the union-of-subspaces generator.
struct SyntheticSpec {
  int n_subspaces = 1;
  int sub_dim = 1;
  int ambient_dim = 1;
  int points_per_subspace = 1;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  DataMatrix data;
  LabelVector labels;
};

/// Samples points from a union of random linear subspaces: for each subspace an
/// orthonormal basis is drawn (orthonormalized Gaussian), each point is the
/// basis applied to a unit-normalized Gaussian coefficient vector plus
/// isotropic Gaussian noise, and columns are normalized to unit length.
/// Deterministic for a fixed spec.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

enum class FileFormat { kCsv, kIdx };

/// Loads a data matrix with columns as points. CSV is read as rows=features,
/// columns=points. IDX image files are flattened column-wise per image and
/// pixel values are scaled to [0, 1].
DataMatrix load_matrix(const std::string& path, FileFormat format);

/// Loads ground-truth labels: a 1-d IDX byte file or a CSV of integers.
LabelVector load_labels(const std::string& path, FileFormat format);

/// Projects the mean-centered columns onto the top principal directions.
/// The result is target_dim x N. Direction signs are fixed so the
/// largest-magnitude entry of each direction is positive.
DataMatrix pca_project(const DataMatrix& x, int target_dim);

struct NormalizeResult {
  DataMatrix data;
  std::vector<Index> zero_columns;  // columns left untouched (zero norm)
};

/// Scales every nonzero column to unit l2 norm; zero columns are reported.
NormalizeResult normalize_columns(const DataMatrix& x);

}  // namespace subclust
