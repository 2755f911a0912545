#include "subclust/eval.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subclust/spectral.hpp"

namespace subclust {

std::vector<int> hungarian_min_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1) {
    throw std::invalid_argument("hungarian_min_assignment: cost must be square");
  }
  const int n = static_cast<int>(cost.rows());

  // potentials method, 1-indexed with a virtual row/column 0
  std::vector<double> u(std::size_t(n) + 1, 0.0), v(std::size_t(n) + 1, 0.0);
  std::vector<int> p(std::size_t(n) + 1, 0), way(std::size_t(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(std::size_t(n) + 1, kInfinity);
    std::vector<char> used(std::size_t(n) + 1, 0);
    do {
      used[std::size_t(j0)] = 1;
      const int i0 = p[std::size_t(j0)];
      int j1 = -1;
      double delta = kInfinity;
      for (int j = 1; j <= n; ++j) {
        if (used[std::size_t(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[std::size_t(i0)] - v[std::size_t(j)];
        if (cur < minv[std::size_t(j)]) {
          minv[std::size_t(j)] = cur;
          way[std::size_t(j)] = j0;
        }
        if (minv[std::size_t(j)] < delta) {
          delta = minv[std::size_t(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[std::size_t(j)]) {
          u[std::size_t(p[std::size_t(j)])] += delta;
          v[std::size_t(j)] -= delta;
        } else {
          minv[std::size_t(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[std::size_t(j0)] != 0);
    do {
      const int j1 = way[std::size_t(j0)];
      p[std::size_t(j0)] = p[std::size_t(j1)];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(std::size_t(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (p[std::size_t(j)] > 0) row_to_col[std::size_t(p[std::size_t(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

namespace {

Matrix contingency(const LabelVector& pred, const LabelVector& truth, int side) {
  Matrix cnt = Matrix::Zero(side, side);
  for (Index i = 0; i < pred.size(); ++i) {
    cnt(pred.labels[i], truth.labels[i]) += 1.0;
  }
  return cnt;
}

void check_lengths(const LabelVector& pred, const LabelVector& truth,
                   const char* who) {
  if (pred.size() != truth.size()) {
    throw std::invalid_argument(std::string(who) + ": label vectors differ in length");
  }
}

double lambda2(const AffinityMatrix& w) {
  if (w.size() < 2) return 1.0;
  const Matrix l = normalized_laplacian(w);
  Eigen::SelfAdjointEigenSolver<Matrix> es(l, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("connectivity: eigensolver did not converge");
  }
  return std::max(0.0, es.eigenvalues()[1]);
}

}  // namespace

double clustering_accuracy(const LabelVector& pred, const LabelVector& truth) {
  check_lengths(pred, truth, "clustering_accuracy");
  const int side = std::max(pred.k, truth.k);
  const Matrix cnt = contingency(pred, truth, side);
  const std::vector<int> match = hungarian_min_assignment(-cnt);
  double hits = 0.0;
  for (int i = 0; i < side; ++i) hits += cnt(i, match[std::size_t(i)]);
  return hits / double(pred.size());
}

double nmi(const LabelVector& pred, const LabelVector& truth, NmiNorm norm) {
  check_lengths(pred, truth, "nmi");
  const double n = double(pred.size());
  const int side = std::max(pred.k, truth.k);
  const Matrix cnt = contingency(pred, truth, side);
  const Vector a = cnt.rowwise().sum();
  const Vector b = cnt.colwise().sum();

  double hp = 0.0, ht = 0.0, mi = 0.0;
  for (int i = 0; i < side; ++i) {
    if (a[i] > 0.0) hp -= (a[i] / n) * std::log(a[i] / n);
    if (b[i] > 0.0) ht -= (b[i] / n) * std::log(b[i] / n);
  }
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const double nij = cnt(i, j);
      if (nij > 0.0) {
        mi += (nij / n) * std::log(n * nij / (a[i] * b[j]));
      }
    }
  }

  if (hp == 0.0 && ht == 0.0) return 1.0;
  if (hp == 0.0 || ht == 0.0) return 0.0;
  const double denom =
      norm == NmiNorm::kSqrt ? std::sqrt(hp * ht) : 0.5 * (hp + ht);
  return std::clamp(mi / denom, 0.0, 1.0);
}

double connectivity(const AffinityMatrix& w, const LabelVector& truth,
                    ConnectivityScope scope) {
  if (w.size() != truth.size()) {
    throw std::invalid_argument("connectivity: affinity and labels differ in size");
  }
  if (scope == ConnectivityScope::kWholeGraph) return lambda2(w);

  double worst = kInfinity;
  for (int c = 0; c < truth.k; ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < truth.size(); ++i) {
      if (truth.labels[i] == c) members.push_back(i);
    }
    const Index s = static_cast<Index>(members.size());
    double l2;
    if (s <= 1) {
      l2 = 1.0;
    } else {
      Matrix sub(s, s);
      for (Index jj = 0; jj < s; ++jj) {
        for (Index ii = 0; ii < s; ++ii) {
          sub(ii, jj) = w.values(members[std::size_t(ii)], members[std::size_t(jj)]);
        }
      }
      l2 = lambda2(AffinityMatrix(std::move(sub)));
    }
    worst = std::min(worst, l2);
  }
  return worst;
}

double ncut_value(const AffinityMatrix& w, const LabelVector& labels) {
  if (w.size() != labels.size()) {
    throw std::invalid_argument("ncut_value: affinity and labels differ in size");
  }
  const Index n = w.size();
  const Matrix& m = w.values;
  double total = 0.0;
  for (int c = 0; c < labels.k; ++c) {
    double vol = 0.0, cut = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (labels.labels[i] != c) continue;
      for (Index j = 0; j < n; ++j) {
        vol += m(i, j);
        if (labels.labels[j] != c) cut += m(i, j);
      }
    }
    if (vol == 0.0) {
      if (cut != 0.0) {
        throw std::runtime_error("ncut_value: zero-volume cluster with nonzero cut");
      }
      continue;
    }
    total += cut / vol;
  }
  return total;
}

double sparsity(const Matrix& m, double zero_floor) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("sparsity: matrix must be square");
  }
  const Index n = m.rows();
  if (n < 2) return 1.0;
  Index zeros = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j && std::abs(m(i, j)) <= zero_floor) ++zeros;
    }
  }
  return double(zeros) / double(n * (n - 1));
}

}  // namespace subclust
