#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "subclust/gbto.hpp"
#include "subclust/rng.hpp"

using namespace subclust;

namespace {

// symmetric affinity with entries in (0, 1], a fraction knocked out to zero
AffinityMatrix random_affinity(Index n, std::uint64_t seed, double zero_frac) {
  Rng rng(seed);
  Matrix w = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      double v = rng.uniform() < zero_frac ? 0.0 : 0.05 + 0.95 * rng.uniform();
      w(i, j) = w(j, i) = v;
    }
  }
  return AffinityMatrix(std::move(w));
}

DistanceMatrix random_distance(Index n, std::uint64_t seed, double inf_frac) {
  Rng rng(seed);
  Matrix d = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      double v = rng.uniform() < inf_frac ? kInfinity : 0.05 + rng.uniform();
      d(i, j) = d(j, i) = v;
    }
  }
  return DistanceMatrix(std::move(d));
}

Index nnz_offdiag(const Matrix& m) {
  Index c = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != 0.0) ++c;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("wdt: reciprocal and log transforms on known entries") {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 0.5;
  w(1, 2) = w(2, 1) = 1.0;
  const AffinityMatrix a{w};

  const DistanceMatrix rec = wdt(a, TransformKind::kReciprocal);
  CHECK(rec.values(0, 1) == 2.0);
  CHECK(rec.values(1, 2) == 1.0);
  CHECK(rec.values(0, 2) == kInfinity);  // zero weight: no edge
  CHECK(rec.values.diagonal().cwiseAbs().maxCoeff() == 0.0);

  const DistanceMatrix lg = wdt(a, TransformKind::kLog);
  CHECK(lg.values(0, 1) == doctest::Approx(1.0 - std::log(0.5)).epsilon(1e-15));
  CHECK(lg.values(1, 2) == 1.0);  // w = 1 maps to distance exactly 1
  CHECK(lg.values(0, 2) == kInfinity);
}

TEST_CASE("wdt: weights above one are rejected, tiny overshoot is clamped") {
  Matrix big = Matrix::Zero(2, 2);
  big(0, 1) = big(1, 0) = 1.5;
  CHECK_THROWS_WITH_AS(wdt(AffinityMatrix{big}, TransformKind::kReciprocal),
                       doctest::Contains("exceeds 1"), std::invalid_argument);

  Matrix close = Matrix::Zero(2, 2);
  close(0, 1) = close(1, 0) = 1.0 + 1e-10;  // inside the rounding allowance
  const DistanceMatrix d = wdt(AffinityMatrix{close}, TransformKind::kReciprocal);
  CHECK(d.values(0, 1) == 1.0);
}

TEST_CASE("wdt: zero floor controls what counts as a missing edge") {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = w(1, 0) = 1e-16;
  // below the default floor -> treated as zero
  CHECK(wdt(AffinityMatrix{w}, TransformKind::kReciprocal).values(0, 1) ==
        kInfinity);
  // floor zero keeps it as a real (enormous) distance
  CHECK(wdt(AffinityMatrix{w}, TransformKind::kReciprocal, 0.0).values(0, 1) ==
        doctest::Approx(1e16).epsilon(1e-12));
  CHECK_THROWS_AS(wdt(AffinityMatrix{w}, TransformKind::kReciprocal, -1.0),
                  std::invalid_argument);
}

TEST_CASE("dwt: inverse mapping on known entries") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 1) = d(1, 0) = 2.0;
  d(1, 2) = d(2, 1) = 1.0;
  d(0, 2) = d(2, 0) = kInfinity;
  const DistanceMatrix dist{d};

  const AffinityMatrix rec = dwt(dist, TransformKind::kReciprocal);
  CHECK(rec.values(0, 1) == 0.5);
  CHECK(rec.values(0, 2) == 0.0);

  const AffinityMatrix lg = dwt(dist, TransformKind::kLog);
  CHECK(lg.values(1, 2) == 1.0);  // d = 1 maps back to weight 1
  CHECK(lg.values(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(lg.values(0, 2) == 0.0);
}

TEST_CASE("transform round trip recovers the affinity to machine precision") {
  for (std::uint64_t seed : {10u, 11u, 12u}) {
    const AffinityMatrix w = random_affinity(20, seed, 0.3);
    for (TransformKind t : {TransformKind::kReciprocal, TransformKind::kLog}) {
      const AffinityMatrix back = dwt(wdt(w, t), t);
      CHECK((back.values - w.values).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("shortest paths: chain shortcut and unreachable pair") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 1) = d(1, 0) = 1.0;
  d(1, 2) = d(2, 1) = 1.0;
  d(0, 2) = d(2, 0) = 3.0;
  const DistanceMatrix out = shortest_paths(DistanceMatrix{d}, GbtoMode::kHard);
  CHECK(out.values(0, 2) == 2.0);  // through the middle node
  CHECK(out.values(0, 1) == 1.0);

  Matrix iso = Matrix::Zero(4, 4);
  iso.fill(kInfinity);
  iso.diagonal().setZero();
  iso(0, 1) = iso(1, 0) = 1.0;
  iso(2, 3) = iso(3, 2) = 1.0;
  const DistanceMatrix split = shortest_paths(DistanceMatrix{iso}, GbtoMode::kHard);
  CHECK(split.values(0, 2) == kInfinity);  // components stay separate
  CHECK(split.values(0, 1) == 1.0);
}

TEST_CASE("shortest paths: hard mode agrees with a Dijkstra oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const DistanceMatrix d = random_distance(30, seed, 0.25);
    const DistanceMatrix fast = shortest_paths(d, GbtoMode::kHard);
    const Matrix slow = oracle::dijkstra_apsp(d.values);
    for (Index j = 0; j < 30; ++j) {
      for (Index i = 0; i < 30; ++i) {
        if (std::isinf(slow(i, j))) {
          CHECK(std::isinf(fast.values(i, j)));
        } else {
          CHECK(std::abs(fast.values(i, j) - slow(i, j)) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("shortest paths: soft mode preserves the infinity pattern") {
  const DistanceMatrix d = random_distance(25, 99, 0.4);
  const DistanceMatrix out = shortest_paths(d, GbtoMode::kSoft);
  for (Index j = 0; j < 25; ++j) {
    for (Index i = 0; i < 25; ++i) {
      CHECK(std::isinf(out.values(i, j)) == std::isinf(d.values(i, j)));
    }
  }
}

TEST_CASE("shortest paths: soft equals hard when every entry is finite") {
  const DistanceMatrix d = random_distance(30, 5, 0.0);
  const DistanceMatrix hard = shortest_paths(d, GbtoMode::kHard);
  const DistanceMatrix soft = shortest_paths(d, GbtoMode::kSoft);
  CHECK(hard.values == soft.values);
}

TEST_CASE("shortest paths: soft refuses the detour a hard pass would take") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 1) = d(1, 0) = 1.0;
  d(1, 2) = d(2, 1) = 1.0;
  d(0, 2) = d(2, 0) = kInfinity;
  const DistanceMatrix hard = shortest_paths(DistanceMatrix{d}, GbtoMode::kHard);
  const DistanceMatrix soft = shortest_paths(DistanceMatrix{d}, GbtoMode::kSoft);
  CHECK(hard.values(0, 2) == 2.0);        // path through node 1
  CHECK(soft.values(0, 2) == kInfinity);  // frozen: was missing in the input
}

TEST_CASE("shortest paths: soft relaxation on a worked four-node example") {
  // edges: 0-1 = 5, 1-2 = 1, 2-3 = 1, 0-2 = 1, 0-3 = 10; only 1-3 is
  // missing, so it alone stays frozen while everything else may improve
  Matrix d(4, 4);
  d.fill(kInfinity);
  d.diagonal().setZero();
  d(0, 1) = d(1, 0) = 5.0;
  d(1, 2) = d(2, 1) = 1.0;
  d(2, 3) = d(3, 2) = 1.0;
  d(0, 2) = d(2, 0) = 1.0;
  d(0, 3) = d(3, 0) = 10.0;
  const DistanceMatrix soft = shortest_paths(DistanceMatrix{d}, GbtoMode::kSoft);
  CHECK(soft.values(0, 1) == 2.0);  // 0-2-1 beats the direct 5
  CHECK(soft.values(0, 3) == 2.0);  // 0-2-3
  CHECK(soft.values(1, 3) == kInfinity);  // frozen despite the 1-2-3 path
  // the frozen pair must not have been used as a leg anywhere, and every
  // other entry matches plain relaxation on the graph
  const Matrix full = oracle::dijkstra_apsp(d);
  CHECK(soft.values(0, 2) == full(0, 2));
  CHECK(soft.values(2, 3) == full(2, 3));
}

TEST_CASE("gbto: known three-node chain under the reciprocal transform") {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 0.5;
  w(1, 2) = w(2, 1) = 0.5;
  w(0, 2) = w(2, 0) = 0.1;
  // distances 2, 2, 10; shortcut 0-1-2 gives 4 -> weight 0.25 > 0.1
  const AffinityMatrix out =
      gbto(AffinityMatrix{w}, GbtoMode::kHard, TransformKind::kReciprocal);
  CHECK(out.values(0, 2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(out.values(0, 1) == 0.5);
}

TEST_CASE("gbto: log transform composes edge weights multiplicatively") {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 0.9;
  w(1, 2) = w(2, 1) = 0.9;
  w(0, 2) = w(2, 0) = 0.1;
  // two legs of 1 - ln 0.9 sum to 2 - 2 ln 0.9; back through exp(1 - d)
  // that is exp(-1 + 2 ln 0.9) = 0.81 / e
  const AffinityMatrix out =
      gbto(AffinityMatrix{w}, GbtoMode::kHard, TransformKind::kLog);
  CHECK(out.values(0, 2) ==
        doctest::Approx(0.81 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("gbto: a metric-consistent graph is left untouched") {
  // direct distances all shorter than any two-leg path: nothing to improve
  Rng rng(21);
  Matrix w = Matrix::Zero(5, 5);
  for (Index j = 0; j < 5; ++j) {
    for (Index i = j + 1; i < 5; ++i) {
      // weights in (0.526, 1]: distances in [1, 1.9), two-leg sums >= 2
      double v = 1.0 / (1.0 + 0.9 * rng.uniform());
      w(i, j) = w(j, i) = v;
    }
  }
  const AffinityMatrix out =
      gbto(AffinityMatrix{w}, GbtoMode::kHard, TransformKind::kReciprocal);
  CHECK((out.values - w).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("gbto: output dominates the input exactly") {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    const AffinityMatrix w = random_affinity(25, seed, 0.5);
    for (GbtoMode mode : {GbtoMode::kHard, GbtoMode::kSoft}) {
      const AffinityMatrix out = gbto(w, mode, TransformKind::kReciprocal);
      CHECK((out.values.array() >= w.values.array()).all());
      CHECK(out.values.maxCoeff() <= 1.0);
      CHECK(out.values.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("gbto: soft keeps the sparsity pattern, hard only densifies") {
  const AffinityMatrix w = random_affinity(30, 77, 0.6);
  const AffinityMatrix soft = gbto(w, GbtoMode::kSoft, TransformKind::kReciprocal);
  const AffinityMatrix hard = gbto(w, GbtoMode::kHard, TransformKind::kReciprocal);
  for (Index j = 0; j < 30; ++j) {
    for (Index i = 0; i < 30; ++i) {
      CHECK((soft.values(i, j) == 0.0) == (w.values(i, j) == 0.0));
    }
  }
  CHECK(nnz_offdiag(hard.values) >= nnz_offdiag(w.values));
}

TEST_CASE("gbto: hard pass is idempotent") {
  const AffinityMatrix w = random_affinity(20, 55, 0.4);
  const AffinityMatrix once = gbto(w, GbtoMode::kHard, TransformKind::kReciprocal);
  const AffinityMatrix twice =
      gbto(once, GbtoMode::kHard, TransformKind::kReciprocal);
  CHECK((twice.values - once.values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("blocked relaxation matches the reference kernel") {
  for (Index n : {Index(1), Index(2), Index(3), Index(63), Index(64), Index(65),
                  Index(130)}) {
    Rng rng(std::uint64_t(n) * 7 + 1);
    Matrix d = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = j + 1; i < n; ++i) {
        double v = rng.uniform() < 0.2 ? kInfinity : 0.05 + rng.uniform();
        d(i, j) = d(j, i) = v;
      }
    }
    Matrix ref = d;
    apsp_reference(ref);
    for (int bs : {1, 64, 256}) {
      Matrix blk = d;
      apsp_blocked(blk, bs);
      for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
          if (std::isinf(ref(i, j))) {
            CHECK(std::isinf(blk(i, j)));
          } else {
            CHECK(std::abs(blk(i, j) - ref(i, j)) <= 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("blocked relaxation keeps a symmetric input exactly symmetric") {
  const DistanceMatrix d = random_distance(70, 13, 0.2);
  Matrix m = d.values;
  apsp_blocked(m, 64);
  CHECK(m == Matrix(m.transpose()));
}

TEST_CASE("apsp kernels validate their arguments") {
  Matrix bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(apsp_reference(bad), std::invalid_argument);
  Matrix ok = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(apsp_blocked(ok, 0), std::invalid_argument);
}
