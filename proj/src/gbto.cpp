#include "subclust/gbto.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace subclust {

namespace {

// relax tile [i0,i1) x [j0,j1) through pivots k in [k0,k1), in place;
// column-oriented inner loop so both the read and the write stream down a
// contiguous column
void relax_tile(Matrix& m, Index k0, Index k1, Index i0, Index i1, Index j0,
                Index j1) {
  double* data = m.data();
  const Index n = m.rows();
  for (Index k = k0; k < k1; ++k) {
    const double* colk = data + k * n;
    for (Index j = j0; j < j1; ++j) {
      const double dkj = data[j * n + k];
      if (!(dkj < kInfinity)) continue;
      double* colj = data + j * n;
      for (Index i = i0; i < i1; ++i) {
        const double cand = colk[i] + dkj;
        if (cand < colj[i]) colj[i] = cand;
      }
    }
  }
}

void soft_relax(Matrix& m) {
  const Index n = m.rows();
  // pattern of finite off-diagonal entries, frozen from the input; only these
  // targets are ever written, and since they only shrink the pattern is stable
  std::vector<char> finite(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  std::vector<std::vector<Index>> nbr(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j && m(i, j) < kInfinity) {
        finite[static_cast<std::size_t>(i * n + j)] = 1;
        nbr[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }

  for (Index k = 0; k < n; ++k) {
    const auto& nk = nbr[static_cast<std::size_t>(k)];
    const Index cnt = static_cast<Index>(nk.size());
    // row k and column k are fixed points of pass k, so parallel rows are safe
#pragma omp parallel for schedule(static)
    for (Index a = 0; a < cnt; ++a) {
      const Index i = nk[static_cast<std::size_t>(a)];
      const double dik = m(i, k);
      for (Index b = 0; b < cnt; ++b) {
        const Index j = nk[static_cast<std::size_t>(b)];
        if (j == i || !finite[static_cast<std::size_t>(i * n + j)]) continue;
        const double cand = dik + m(k, j);
        if (cand < m(i, j)) m(i, j) = cand;
      }
    }
  }
}

bool has_infinite_offdiag(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && !(m(i, j) < kInfinity)) return true;
    }
  }
  return false;
}

}  // namespace

DistanceMatrix wdt(const AffinityMatrix& w, TransformKind t, double zero_floor) {
  if (zero_floor < 0.0) {
    throw std::invalid_argument("wdt: zero_floor must be >= 0");
  }
  const Index n = w.size();
  const Matrix& src = w.values;
  Matrix d(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) {
        d(i, j) = 0.0;
        continue;
      }
      double v = src(i, j);
      if (v > 1.0 + 1e-9) {
        throw std::invalid_argument("wdt: weight exceeds 1");
      }
      if (v > 1.0) v = 1.0;
      if (v <= zero_floor) {
        d(i, j) = kInfinity;
      } else if (t == TransformKind::kReciprocal) {
        d(i, j) = 1.0 / v;
      } else {
        d(i, j) = 1.0 - std::log(v);
      }
    }
  }
  return DistanceMatrix(std::move(d));
}

AffinityMatrix dwt(const DistanceMatrix& dstar, TransformKind t) {
  const Index n = dstar.size();
  const Matrix& src = dstar.values;
  Matrix w(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) {
        w(i, j) = 0.0;
        continue;
      }
      const double v = src(i, j);
      if (!(v < kInfinity)) {
        w(i, j) = 0.0;
      } else if (t == TransformKind::kReciprocal) {
        w(i, j) = 1.0 / v;
      } else {
        w(i, j) = std::exp(1.0 - v);
      }
    }
  }
  return AffinityMatrix(std::move(w));
}

DistanceMatrix shortest_paths(const DistanceMatrix& d, GbtoMode mode) {
  Matrix m = d.values;
  if (mode == GbtoMode::kHard || !has_infinite_offdiag(m)) {
    // without input infinities the soft restriction is vacuous
    apsp_blocked(m);
  } else {
    soft_relax(m);
  }
  return DistanceMatrix(std::move(m));
}

AffinityMatrix gbto(const AffinityMatrix& w, GbtoMode mode, TransformKind t,
                    double zero_floor) {
  const DistanceMatrix d = wdt(w, t, zero_floor);
  const DistanceMatrix dstar = shortest_paths(d, mode);
  const AffinityMatrix wstar = dwt(dstar, t);
  // the round trip reproduces untouched weights only up to rounding; taking
  // the elementwise max keeps w* >= w an identity rather than a near-miss
  return AffinityMatrix(wstar.values.cwiseMax(w.values));
}

void apsp_reference(Matrix& d) {
  if (d.rows() != d.cols()) {
    throw std::invalid_argument("apsp_reference: matrix must be square");
  }
  const Index n = d.rows();
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      const double dik = d(i, k);
      if (!(dik < kInfinity)) continue;
      for (Index j = 0; j < n; ++j) {
        const double cand = dik + d(k, j);
        if (cand < d(i, j)) d(i, j) = cand;
      }
    }
  }
}

void apsp_blocked(Matrix& d, int block_size) {
  if (d.rows() != d.cols()) {
    throw std::invalid_argument("apsp_blocked: matrix must be square");
  }
  if (block_size < 1) {
    throw std::invalid_argument("apsp_blocked: block_size must be >= 1");
  }
  const Index n = d.rows();
  const Index bs = static_cast<Index>(block_size);
  const Index nb = (n + bs - 1) / bs;

  for (Index kb = 0; kb < nb; ++kb) {
    const Index k0 = kb * bs;
    const Index k1 = std::min(k0 + bs, n);

    // pivot block against itself
    relax_tile(d, k0, k1, k0, k1, k0, k1);

    // pivot row and column panels; independent of each other
#pragma omp parallel for schedule(static)
    for (Index jb = 0; jb < nb; ++jb) {
      if (jb == kb) continue;
      const Index j0 = jb * bs;
      const Index j1 = std::min(j0 + bs, n);
      relax_tile(d, k0, k1, k0, k1, j0, j1);  // row panel
      relax_tile(d, k0, k1, j0, j1, k0, k1);  // column panel
    }

    // everything else, reading only the frozen panels
#pragma omp parallel for schedule(static)
    for (Index t = 0; t < nb * nb; ++t) {
      const Index ib = t / nb;
      const Index jb = t % nb;
      if (ib == kb || jb == kb) continue;
      const Index i0 = ib * bs;
      const Index i1 = std::min(i0 + bs, n);
      const Index j0 = jb * bs;
      const Index j1 = std::min(j0 + bs, n);
      relax_tile(d, k0, k1, i0, i1, j0, j1);
    }
  }
}

}  // namespace subclust
