#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace momtrans {

// Deterministic pairwise summation. The reduction tree depends only on the
// element count, so results are reproducible regardless of thread count or
// call site.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(std::span<const double>(xs));
}

// Pairwise sum over the value-sorted terms: deterministic and invariant under
// permutation of the inputs. Atom-indexed sums use this so that re-labelling
// atoms (sorting, normal forms) conserves totals bit for bit.
inline double pairwise_sum_sorted(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return pairwise_sum(xs);
}

}  // namespace momtrans
