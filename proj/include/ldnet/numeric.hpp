#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace ldnet {

// Pairwise (cascade) summation in fixed index order. Deterministic for a
// given input order and noticeably more accurate than a running sum.
double pairwise_sum(std::span<const double> xs);

// Sum that depends only on the multiset of values: sort, then accumulate.
// Used where a quantity must be bit-identical under relabelings that
// permute the summands (cyclic shifts of neuron indices).
double permutation_invariant_sum(std::vector<double>& buf);

// Representative of k modulo the window {-n..n}.
inline int mod_window(int k, int n) {
  int size = 2 * n + 1;
  int r = (k + n) % size;
  if (r < 0) r += size;
  return r - n;
}

// Runs body(i) for i in [0, count) across `threads` workers. Chunks are
// contiguous and index-based, so the work split never changes results as
// long as body(i) writes only to slot i of preallocated storage.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace ldnet
