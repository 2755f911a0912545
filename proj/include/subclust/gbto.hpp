#pragma once

#include "subclust/types.hpp"

namespace subclust {

enum class TransformKind {
  kReciprocal,  // d = 1/w, w = 1/d
  kLog,         // d = 1 - ln w, w = exp(1 - d)
};

enum class GbtoMode {
  kHard,  // full shortest-path closure; may fill in zero weights
  kSoft,  // only entries finite in the input may shrink; zeros stay zero
};

// weights at or below this are treated as zero before the distance transform
inline constexpr double kDefaultZeroFloor = 1e-15;

// Weight -> distance. Entries must lie in [0, 1] (1e-9 slack). Zeros (and
// anything at or below zero_floor) map to +infinity; the diagonal is 0.
DistanceMatrix wdt(const AffinityMatrix& w, TransformKind t,
                   double zero_floor = kDefaultZeroFloor);

// Distance -> weight, the elementwise inverse of wdt. Infinities map to 0.
AffinityMatrix dwt(const DistanceMatrix& dstar, TransformKind t);

// All-pairs shortest paths (Floyd-Warshall). Hard mode relaxes every entry;
// soft mode skips entries that are infinite in the input: they stay infinite
// throughout, so they never supply a finite leg to anyone else either.
DistanceMatrix shortest_paths(const DistanceMatrix& d, GbtoMode mode);

// The full transform chain: dwt(shortest_paths(wdt(W))) combined elementwise
// with W itself, so the result never falls below the input anywhere.
AffinityMatrix gbto(const AffinityMatrix& w, GbtoMode mode, TransformKind t,
                    double zero_floor = kDefaultZeroFloor);

// In-place Floyd-Warshall kernels on a raw square matrix (infinities legal).
// The reference kernel is the textbook triple loop; the blocked kernel tiles
// the iteration space for cache reuse and optional parallel workers. Both
// produce shortest-path distances; they may differ by rounding only.
void apsp_reference(Matrix& d);
void apsp_blocked(Matrix& d, int block_size = 64);

}  // namespace subclust
