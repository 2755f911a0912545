#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "subclust/eval.hpp"
#include "subclust/rng.hpp"

using namespace subclust;

namespace {

LabelVector labels_of(std::initializer_list<int> xs) {
  Eigen::VectorXi v(Index(xs.size()));
  Index i = 0;
  int top = 0;
  for (int x : xs) {
    v[i++] = x;
    top = std::max(top, x);
  }
  return LabelVector(v, top + 1);
}

LabelVector random_labels(Index n, int k, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXi v(n);
  // guarantee every label appears so k is honest
  for (Index i = 0; i < n; ++i) {
    v[i] = i < k ? int(i) : int(rng.below(std::uint64_t(k)));
  }
  return LabelVector(v, k);
}

double brute_min_cost(const Matrix& cost) {
  std::vector<int> perm(std::size_t(cost.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInfinity;
  do {
    double s = 0.0;
    for (Index i = 0; i < cost.rows(); ++i) s += cost(i, perm[std::size_t(i)]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("hungarian: textbook three-by-three instance") {
  Matrix cost(3, 3);
  cost << 4, 1, 3,
          2, 0, 5,
          3, 2, 2;
  const std::vector<int> a = hungarian_min_assignment(cost);
  double total = 0.0;
  for (Index i = 0; i < 3; ++i) total += cost(i, a[std::size_t(i)]);
  CHECK(total == 5.0);  // (0,1) + (1,0) + (2,2)
}

TEST_CASE("hungarian: optimal on random instances, negatives included") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Rng rng(seed);
    Matrix cost(5, 5);
    for (Index j = 0; j < 5; ++j) {
      for (Index i = 0; i < 5; ++i) cost(i, j) = rng.normal() * 4.0;
    }
    const std::vector<int> a = hungarian_min_assignment(cost);
    std::vector<char> seen(5, 0);
    double total = 0.0;
    for (Index i = 0; i < 5; ++i) {
      REQUIRE(a[std::size_t(i)] >= 0);
      REQUIRE(a[std::size_t(i)] < 5);
      CHECK(!seen[std::size_t(a[std::size_t(i)])]);
      seen[std::size_t(a[std::size_t(i)])] = 1;
      total += cost(i, a[std::size_t(i)]);
    }
    CHECK(total == doctest::Approx(brute_min_cost(cost)).epsilon(1e-12));
  }
}

TEST_CASE("accuracy: identical and renamed partitions both score one") {
  const LabelVector t = labels_of({0, 0, 1, 1, 2, 2});
  CHECK(clustering_accuracy(t, t) == 1.0);
  const LabelVector renamed = labels_of({2, 2, 0, 0, 1, 1});
  CHECK(clustering_accuracy(renamed, t) == 1.0);
}

TEST_CASE("accuracy: matches exhaustive permutation search") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Index n = 5 + Index(seed % 8);
    const int kp = 2 + int(seed % 3);
    const int kt = 2 + int((seed / 3) % 3);
    const LabelVector p = random_labels(n, kp, 1000 + seed);
    const LabelVector t = random_labels(n, kt, 2000 + seed);
    CHECK(clustering_accuracy(p, t) ==
          doctest::Approx(oracle::brute_accuracy(p, t)).epsilon(1e-12));
  }
}

TEST_CASE("accuracy: unequal cluster counts are padded, not rejected") {
  const LabelVector p = labels_of({0, 1, 2, 2, 1, 0});
  const LabelVector t = labels_of({0, 0, 1, 1, 1, 0});
  CHECK(clustering_accuracy(p, t) ==
        doctest::Approx(oracle::brute_accuracy(p, t)).epsilon(1e-12));
  CHECK_THROWS_AS(clustering_accuracy(p, labels_of({0, 1})),
                  std::invalid_argument);
}

TEST_CASE("nmi: boundary conventions") {
  const LabelVector t = labels_of({0, 0, 1, 1});
  CHECK(nmi(t, t) == 1.0);
  CHECK(nmi(labels_of({1, 1, 0, 0}), t) == 1.0);  // renaming is free
  CHECK(nmi(labels_of({0, 0, 0, 0}), t) == 0.0);  // one side constant
  CHECK(nmi(labels_of({0, 0, 0, 0}), labels_of({0, 0, 0, 0})) == 1.0);
}

TEST_CASE("nmi: independent partitions score exactly zero") {
  const LabelVector p = labels_of({0, 0, 1, 1, 0, 1, 0, 1});
  const LabelVector t = labels_of({0, 0, 0, 0, 1, 1, 1, 1});
  // every contingency cell holds two points, so the partitions carry no
  // information about each other
  CHECK(nmi(p, t) == 0.0);
}

TEST_CASE("nmi: agrees with a joint-entropy computation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LabelVector p = random_labels(12, 3, 100 + seed);
    const LabelVector t = random_labels(12, 4, 300 + seed);
    CHECK(std::abs(nmi(p, t) - oracle::nmi_by_entropies(p, t, false)) <= 1e-10);
    CHECK(std::abs(nmi(p, t, NmiNorm::kArithmetic) -
                   oracle::nmi_by_entropies(p, t, true)) <= 1e-10);
  }
}

TEST_CASE("nmi: invariant under relabeling either side") {
  const LabelVector p = labels_of({0, 1, 1, 2, 0, 2, 1, 0});
  const LabelVector t = labels_of({1, 1, 0, 0, 2, 2, 0, 1});
  const LabelVector p2 = labels_of({2, 0, 0, 1, 2, 1, 0, 2});  // p renamed
  CHECK(nmi(p, t) == doctest::Approx(nmi(p2, t)).epsilon(1e-14));
}

TEST_CASE("connectivity: complete cluster of three scores 1.5") {
  Matrix w = Matrix::Zero(3, 3);
  for (Index j = 0; j < 3; ++j) {
    for (Index i = 0; i < 3; ++i) {
      if (i != j) w(i, j) = 1.0;
    }
  }
  CHECK(connectivity(AffinityMatrix{w}, labels_of({0, 0, 0})) ==
        doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("connectivity: a cluster split into two components scores zero") {
  Matrix w = Matrix::Zero(4, 4);
  w(0, 1) = w(1, 0) = 1.0;
  w(2, 3) = w(3, 2) = 1.0;
  CHECK(connectivity(AffinityMatrix{w}, labels_of({0, 0, 0, 0})) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("connectivity: singleton clusters count as fully connected") {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  // cluster {0,1} has spectral gap 2, cluster {2} defaults to 1
  CHECK(connectivity(AffinityMatrix{w}, labels_of({0, 0, 1})) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("connectivity: whole-graph scope sees across cluster boundaries") {
  Matrix split = Matrix::Zero(4, 4);
  split(0, 1) = split(1, 0) = 1.0;
  split(2, 3) = split(3, 2) = 1.0;
  const LabelVector t = labels_of({0, 0, 1, 1});
  CHECK(connectivity(AffinityMatrix{split}, t, ConnectivityScope::kWholeGraph) <=
        1e-9);

  Matrix full = Matrix::Constant(4, 4, 1.0);
  full.diagonal().setZero();
  CHECK(connectivity(AffinityMatrix{full}, t, ConnectivityScope::kWholeGraph) >
        0.1);
}

TEST_CASE("connectivity: label count must match the graph") {
  Matrix w = Matrix::Zero(4, 4);
  CHECK_THROWS_AS(connectivity(AffinityMatrix{w}, labels_of({0, 0, 1})),
                  std::invalid_argument);
}

TEST_CASE("ncut: perfect blocks cost nothing") {
  Matrix w = Matrix::Zero(5, 5);
  w(0, 1) = w(1, 0) = 0.8;
  w(2, 3) = w(3, 2) = 0.6;
  w(3, 4) = w(4, 3) = 0.6;
  CHECK(ncut_value(AffinityMatrix{w}, labels_of({0, 0, 1, 1, 1})) == 0.0);
}

TEST_CASE("ncut: splitting a single edge costs two") {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = w(1, 0) = 1.0;
  CHECK(ncut_value(AffinityMatrix{w}, labels_of({0, 1})) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("ncut: invariant under uniform rescaling of the weights") {
  Rng rng(44);
  Matrix w = Matrix::Zero(8, 8);
  for (Index j = 0; j < 8; ++j) {
    for (Index i = j + 1; i < 8; ++i) {
      double v = rng.uniform();
      w(i, j) = w(j, i) = v;
    }
  }
  const LabelVector t = labels_of({0, 1, 2, 0, 1, 2, 0, 1});
  const double base = ncut_value(AffinityMatrix{w}, t);
  const double scaled = ncut_value(AffinityMatrix{Matrix(3.7 * w)}, t);
  CHECK(std::abs(base - scaled) <= 1e-12 * std::max(1.0, base));
}

TEST_CASE("ncut: the planted partition beats a shuffled one") {
  // three blocks with strong internal and weak cross weights
  Rng rng(9);
  Matrix w = Matrix::Zero(12, 12);
  for (Index j = 0; j < 12; ++j) {
    for (Index i = j + 1; i < 12; ++i) {
      const bool same = (i / 4) == (j / 4);
      double v = same ? 0.8 + 0.2 * rng.uniform() : 0.05 * rng.uniform();
      w(i, j) = w(j, i) = v;
    }
  }
  const AffinityMatrix a{w};
  const LabelVector planted =
      labels_of({0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2});
  const LabelVector shuffled =
      labels_of({0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2});
  CHECK(ncut_value(a, planted) < ncut_value(a, shuffled));
}

TEST_CASE("ncut: an isolated vertex in its own cluster adds nothing") {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  CHECK(ncut_value(AffinityMatrix{w}, labels_of({0, 0, 1})) == 0.0);
}

TEST_CASE("sparsity: fraction of absent off-diagonal entries") {
  CHECK(sparsity(Matrix::Zero(5, 5)) == 1.0);
  Matrix dense = Matrix::Constant(4, 4, 0.2);
  CHECK(sparsity(dense) == 0.0);

  Matrix half = Matrix::Zero(4, 4);
  half(0, 1) = half(1, 0) = 0.5;
  half(2, 3) = half(3, 2) = 0.5;
  half(1, 2) = half(2, 1) = 0.5;
  CHECK(sparsity(half) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sparsity: entries at the floor count as absent") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1e-15;  // exactly at the default floor
  m(1, 0) = 2e-15;  // just above
  CHECK(sparsity(m) == 0.5);
  CHECK(sparsity(m, 2e-15) == 1.0);
}

TEST_CASE("sparsity: degenerate shapes") {
  CHECK(sparsity(Matrix::Zero(1, 1)) == 1.0);
  CHECK_THROWS_AS(sparsity(Matrix::Zero(2, 3)), std::invalid_argument);
}
