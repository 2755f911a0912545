#include "subclust/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "subclust/rng.hpp"

namespace subclust {

Matrix normalized_laplacian(const AffinityMatrix& w) {
  const Index n = w.size();
  const Matrix& m = w.values;
  Vector scale(n);
  for (Index i = 0; i < n; ++i) {
    const double deg = m.row(i).sum();
    scale[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
  }
  Matrix l(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      l(i, j) = (i == j) ? 1.0 : -scale[i] * scale[j] * m(i, j);
    }
  }
  return l;
}

Embedding spectral_embed(const AffinityMatrix& w, int k) {
  const Index n = w.size();
  if (k < 2 || Index(k) > n) {
    throw std::invalid_argument("spectral_embed: k must be in [2, N]");
  }
  const Matrix l = normalized_laplacian(w);
  Eigen::SelfAdjointEigenSolver<Matrix> es(l);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral_embed: eigensolver did not converge");
  }
  // eigenvalues come back ascending, so the leading k columns are what we want
  Matrix e = es.eigenvectors().leftCols(k);
  for (Index i = 0; i < n; ++i) {
    const double norm = e.row(i).norm();
    if (norm > 0.0) e.row(i) /= norm;
  }
  return Embedding(std::move(e));
}

namespace {

// squared distance from each point (row) to each centroid; assignment by
// nearest centroid, lowest index on ties
void assign_points(const Matrix& pts, const Matrix& centroids,
                   std::vector<int>& labels) {
  const Index n = pts.rows();
  const Index k = centroids.rows();
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = (pts.row(i) - centroids.row(0)).squaredNorm();
    for (Index c = 1; c < k; ++c) {
      const double d = (pts.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = int(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
}

double wcss_of(const Matrix& pts, const Matrix& centroids,
               const std::vector<int>& labels) {
  double total = 0.0;
  for (Index i = 0; i < pts.rows(); ++i) {
    total +=
        (pts.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

Matrix plus_plus_init(const Matrix& pts, int k, Rng& rng) {
  const Index n = pts.rows();
  Matrix centroids(k, pts.cols());
  centroids.row(0) = pts.row(static_cast<Index>(rng.below(std::uint64_t(n))));
  Vector d2(n);
  for (Index i = 0; i < n; ++i) {
    d2[i] = (pts.row(i) - centroids.row(0)).squaredNorm();
  }
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    } else {
      // every point already coincides with a centroid
      pick = static_cast<Index>(rng.below(std::uint64_t(n)));
    }
    centroids.row(c) = pts.row(pick);
    for (Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (pts.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

struct LloydOutcome {
  std::vector<int> labels;
  double wcss = 0.0;
  bool degenerate = false;
  int iterations = 0;
};

LloydOutcome lloyd(const Matrix& pts, int k, Rng& rng) {
  const Index n = pts.rows();
  Matrix centroids = plus_plus_init(pts, k, rng);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  LloydOutcome out;

  double prev_wcss = -1.0;
  for (int iter = 0; iter < 300; ++iter) {
    out.iterations = iter + 1;
    assign_points(pts, centroids, labels);

    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (int lab : labels) ++counts[static_cast<std::size_t>(lab)];

    // re-seed empty clusters with the farthest point of a cluster that can
    // spare one; if even the farthest point sits on its centroid, the data
    // cannot fill k clusters
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index far = -1;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        const int owner = labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(owner)] <= 1) continue;
        const double d = (pts.row(i) - centroids.row(owner)).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far < 0 || far_d <= 1e-24) {
        out.degenerate = true;
        if (far < 0) continue;
      }
      --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
      labels[static_cast<std::size_t>(far)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      centroids.row(c) = pts.row(far);
    }

    Matrix sums = Matrix::Zero(k, pts.cols());
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += pts.row(i);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) =
            sums.row(c) / double(counts[static_cast<std::size_t>(c)]);
      }
    }

    const double cur = wcss_of(pts, centroids, labels);
    if (prev_wcss >= 0.0 &&
        std::abs(prev_wcss - cur) <= 1e-9 * std::max(prev_wcss, 1e-12)) {
      out.wcss = cur;
      out.labels = labels;
      return out;
    }
    prev_wcss = cur;
  }
  assign_points(pts, centroids, labels);
  out.wcss = wcss_of(pts, centroids, labels);
  out.labels = labels;
  return out;
}

}  // namespace

KmeansResult kmeans(const Embedding& e, int k, std::uint64_t seed,
                    int restarts) {
  const Index n = e.points();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (Index(k) > n) throw std::invalid_argument("kmeans: k exceeds point count");
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");

  const Matrix& pts = e.values;
  Rng rng(seed);

  LloydOutcome best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    LloydOutcome cur = lloyd(pts, k, rng);
    if (!have || cur.wcss < best.wcss) {
      best = std::move(cur);
      have = true;
    }
  }

  Eigen::VectorXi labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = best.labels[static_cast<std::size_t>(i)];
  KmeansResult out;
  out.labels = LabelVector(std::move(labels), k);
  out.wcss = best.wcss;
  out.degenerate = best.degenerate;
  out.iterations = best.iterations;
  return out;
}

KmeansResult spectral_clustering(const AffinityMatrix& w, int k,
                                 std::uint64_t seed, int restarts) {
  const Index n = w.size();
  if (k == 1) {
    KmeansResult out;
    out.labels = LabelVector(Eigen::VectorXi::Zero(n), 1);
    return out;
  }
  const bool no_structure = (w.values.maxCoeff() == 0.0);
  const Embedding e = spectral_embed(w, k);
  KmeansResult out = kmeans(e, k, seed, restarts);
  if (no_structure) out.degenerate = true;
  return out;
}

}  // namespace subclust
