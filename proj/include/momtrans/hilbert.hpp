#pragma once

#include <array>
#include <cstdint>

#include "momtrans/common.hpp"

namespace momtrans::curves::detail {

// Hilbert index arithmetic on the 2^p x ... x 2^p cell grid, n in {1,2,3}.
// The conversions below are Skilling's transposed-index algorithm
// ("Programming the Hilbert curve", 2004): pure bit operations, exact for
// n*(p+1) <= 63 bits. For n=2 the resulting traversal is the classic curve
// that starts in the cell at the origin and ends in the cell at (2^p-1, 0).

using CellCoord = std::array<std::uint64_t, kMaxDim>;

// index -> coordinates ("transpose to axes"); X holds p bits per axis.
inline void transpose_to_axes(CellCoord& x, int p, int n) {
  const std::uint64_t top = std::uint64_t{1} << p;
  std::uint64_t t = x[static_cast<std::size_t>(n - 1)] >> 1;
  for (int i = n - 1; i > 0; --i) x[static_cast<std::size_t>(i)] ^= x[static_cast<std::size_t>(i - 1)];
  x[0] ^= t;
  for (std::uint64_t q = 2; q != top; q <<= 1) {
    const std::uint64_t mask = q - 1;
    for (int i = n - 1; i >= 0; --i) {
      auto& xi = x[static_cast<std::size_t>(i)];
      if (xi & q) {
        x[0] ^= mask;  // invert low bits
      } else {
        const std::uint64_t swap = (x[0] ^ xi) & mask;
        x[0] ^= swap;
        xi ^= swap;
      }
    }
  }
}

// coordinates -> index ("axes to transpose").
inline void axes_to_transpose(CellCoord& x, int p, int n) {
  const std::uint64_t top = std::uint64_t{1} << (p - 1);
  for (std::uint64_t q = top; q > 1; q >>= 1) {
    const std::uint64_t mask = q - 1;
    for (int i = 0; i < n; ++i) {
      auto& xi = x[static_cast<std::size_t>(i)];
      if (xi & q) {
        x[0] ^= mask;
      } else {
        const std::uint64_t swap = (x[0] ^ xi) & mask;
        x[0] ^= swap;
        xi ^= swap;
      }
    }
  }
  for (int i = 1; i < n; ++i) x[static_cast<std::size_t>(i)] ^= x[static_cast<std::size_t>(i - 1)];
  std::uint64_t t = 0;
  for (std::uint64_t q = top; q > 1; q >>= 1)
    if (x[static_cast<std::size_t>(n - 1)] & q) t ^= q - 1;
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] ^= t;
}

// Bit distribution between the linear index and the transposed form:
// bit j of axis i corresponds to bit (j*n + (n-1-i)) of the index, so the
// level-1 (coarsest) digit occupies the most significant n bits.
inline void index_to_transpose(std::uint64_t h, CellCoord& x, int p, int n) {
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = 0;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) {
      const int bit = j * n + (n - 1 - i);
      x[static_cast<std::size_t>(i)] |= ((h >> bit) & 1u) << j;
    }
}

inline std::uint64_t transpose_to_index(const CellCoord& x, int p, int n) {
  std::uint64_t h = 0;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) {
      const int bit = j * n + (n - 1 - i);
      h |= ((x[static_cast<std::size_t>(i)] >> j) & 1u) << bit;
    }
  return h;
}

inline CellCoord cell_of_index(std::uint64_t h, int p, int n) {
  CellCoord x{};
  if (n == 1) {
    x[0] = h;
    return x;
  }
  index_to_transpose(h, x, p, n);
  transpose_to_axes(x, p, n);
  return x;
}

inline std::uint64_t index_of_cell(CellCoord cell, int p, int n) {
  if (n == 1) return cell[0];
  axes_to_transpose(cell, p, n);
  return transpose_to_index(cell, p, n);
}

// Corners of the visit of cell h: the junction points the ideal curve passes
// through at parameters h/2^{np} and (h+1)/2^{np}. Both are cell corners with
// p-bit dyadic coordinates. They are recovered from the first/last depth-(p+1)
// sub-cell: the junction is the unique corner of that sub-cell whose
// coordinates are even at scale 2^{-(p+1)}.
struct CellGeometry {
  CellCoord cell;    // lower corner, scale 2^{-p}
  CellCoord entry;   // scale 2^{-p}, values in [0, 2^p]
  CellCoord exit;    // scale 2^{-p}
  CellCoord center;  // scale 2^{-(p+1)}, odd values
};

inline CellGeometry cell_geometry(std::uint64_t h, int p, int n) {
  CellGeometry g;
  g.cell = cell_of_index(h, p, n);
  if (n == 1) {
    g.entry = {h};
    g.exit = {h + 1};
    g.center = {2 * h + 1};
    return g;
  }
  const CellCoord first = cell_of_index(h << n, p + 1, n);
  const CellCoord last = cell_of_index(((h + 1) << n) - 1, p + 1, n);
  for (int i = 0; i < n; ++i) {
    const auto s = static_cast<std::size_t>(i);
    g.entry[s] = (first[s] + (first[s] & 1u)) >> 1;
    g.exit[s] = (last[s] + (last[s] & 1u)) >> 1;
    g.center[s] = 2 * g.cell[s] + 1;
  }
  return g;
}

}  // namespace momtrans::curves::detail
