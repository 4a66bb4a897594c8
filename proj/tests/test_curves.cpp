#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "momtrans/curves.hpp"

using momtrans::Box;
using momtrans::Point;
using namespace momtrans::curves;

namespace {

// Independent reference for the planar curve: direct quadrant recursion.
// The four affine maps send the unit square onto its quadrants in traversal
// order lower-left, upper-left, upper-right, lower-right:
//   A_0(v) = (v_y/2,       v_x/2)            (transpose)
//   A_1(v) = (v_x/2,       v_y/2 + 1/2)
//   A_2(v) = (v_x/2 + 1/2, v_y/2 + 1/2)
//   A_3(v) = (1 - v_y/2,   1/2 - v_x/2)      (anti-transpose)
// Junction fixed points worked out by hand: H(0)=(0,0), H(1/4)=(0,1/2),
// H(1/2)=(1/2,1/2), H(3/4)=(1,1/2), H(1)=(1,0).
struct Ref2D {
  // integer scale 2^p for entry/exit, 2^{p+1} for center
  std::array<long long, 2> entry, exit, center, cell;

  static Ref2D at(std::uint64_t h, int p) {
    static const int N[4][2][2] = {{{0, 1}, {1, 0}},
                                   {{1, 0}, {0, 1}},
                                   {{1, 0}, {0, 1}},
                                   {{0, -1}, {-1, 0}}};
    static const int a[4][2] = {{0, 0}, {0, 1}, {1, 1}, {2, 1}};
    long long M[2][2] = {{1, 0}, {0, 1}};
    long long b[2] = {0, 0};
    for (int lev = p - 1; lev >= 0; --lev) {
      const int d = static_cast<int>((h >> (2 * lev)) & 3u);
      long long nb[2], nM[2][2];
      for (int r = 0; r < 2; ++r) {
        nb[r] = M[r][0] * a[d][0] + M[r][1] * a[d][1] + 2 * b[r];
        for (int c = 0; c < 2; ++c) nM[r][c] = M[r][0] * N[d][0][c] + M[r][1] * N[d][1][c];
      }
      for (int r = 0; r < 2; ++r) {
        b[r] = nb[r];
        for (int c = 0; c < 2; ++c) M[r][c] = nM[r][c];
      }
    }
    Ref2D g;
    for (int r = 0; r < 2; ++r) {
      g.entry[r] = b[r];
      g.exit[r] = M[r][0] + b[r];                            // T(1,0)
      g.center[r] = M[r][0] + M[r][1] + 2 * b[r];            // 2*T(1/2,1/2)
      g.cell[r] = std::min(b[r], b[r] + M[r][0] + M[r][1]);  // min corner: T(0,0) vs T(1,1)
    }
    return g;
  }
};

std::uint64_t total_cells(int p, int n) { return std::uint64_t{1} << (n * p); }

}  // namespace

TEST_CASE("planar index mapping agrees with the quadrant recursion", "[curves]") {
  using namespace momtrans::curves::detail;
  for (int p = 1; p <= 6; ++p) {
    for (std::uint64_t h = 0; h < total_cells(p, 2); ++h) {
      const Ref2D ref = Ref2D::at(h, p);
      const CellGeometry g = cell_geometry(h, p, 2);
      for (int i = 0; i < 2; ++i) {
        REQUIRE(static_cast<long long>(g.cell[i]) == ref.cell[i]);
        REQUIRE(static_cast<long long>(g.entry[i]) == ref.entry[i]);
        REQUIRE(static_cast<long long>(g.exit[i]) == ref.exit[i]);
        REQUIRE(static_cast<long long>(g.center[i]) == ref.center[i]);
      }
      // round trip through the inverse index map
      REQUIRE(index_of_cell(g.cell, p, 2) == h);
    }
  }
}

TEST_CASE("unit square endpoint and junction conventions", "[curves]") {
  const SpaceCurve c = build_hilbert(Box::unit(2), 8);

  const Point p0 = c.eval(0.0);
  REQUIRE(p0[0] == 0.0);
  REQUIRE(p0[1] == 0.0);

  const Point p1 = c.eval(1.0);
  REQUIRE(p1[0] == 1.0);
  REQUIRE(p1[1] == 0.0);

  const Point ph = c.eval(0.5);
  REQUIRE(ph[0] == 0.5);
  REQUIRE(ph[1] == 0.5);

  // depth-1 junctions of the ideal curve, stable at every depth
  const Point q1 = c.eval(0.25);
  REQUIRE(q1[0] == 0.0);
  REQUIRE(q1[1] == 0.5);
  const Point q3 = c.eval(0.75);
  REQUIRE(q3[0] == 1.0);
  REQUIRE(q3[1] == 0.5);

  REQUIRE_THROWS_AS(c.eval(1.5), momtrans::input_error);
  REQUIRE_THROWS_AS(c.eval(-0.5), momtrans::input_error);
}

TEST_CASE("cell-center round trips are bit-exact", "[curves]") {
  const int p = 6;
  const SpaceCurve c = build_hilbert(Box::unit(2), p);
  const double scale = std::ldexp(1.0, 2 * p);
  for (std::uint64_t h = 0; h < total_cells(p, 2); ++h) {
    const double tstar = (static_cast<double>(h) + 0.5) / scale;
    const Point x = c.eval(tstar);
    const double t = c.right_inverse(x);
    REQUIRE(t == tstar);
    const Point y = c.eval(t);
    REQUIRE(y[0] == x[0]);
    REQUIRE(y[1] == x[1]);
  }
}

TEST_CASE("right inverse tie rules", "[curves]") {
  const SpaceCurve c1 = build_hilbert(Box::unit(2), 1);

  // corner of the first cell is the exact curve start
  REQUIRE(c1.right_inverse(Point{0.0, 0.0}) == 0.0);
  // end corner is the exact curve end
  REQUIRE(c1.right_inverse(Point{1.0, 0.0}) == 1.0);
  // face point shared by cells 0 and 1: smaller candidate wins (center of cell 0)
  REQUIRE(c1.right_inverse(Point{0.25, 0.5}) == 0.125);
  // the four-cell corner: minimal candidate over all containing cells
  REQUIRE(c1.right_inverse(Point{0.5, 0.5}) == 0.125);

  REQUIRE_THROWS_AS(c1.right_inverse(Point{2.0, 0.0}), momtrans::domain_error);

  // determinism: repeated calls agree bit-exactly
  const SpaceCurve c8 = build_hilbert(Box::unit(2), 8);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Point x{u(rng), u(rng)};
    const double a = c8.right_inverse(x);
    const double b = c8.right_inverse(x);
    REQUIRE(a == b);
  }
}

TEST_CASE("Hoelder bound with constant 4 on the unit square", "[curves]") {
  const SpaceCurve c = build_hilbert(Box::unit(2), 8);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double s = u(rng), t = u(rng);
    const double d = momtrans::inf_dist(c.eval(s), c.eval(t));
    REQUIRE(d <= 4.0 * std::sqrt(std::abs(s - t)));
  }
}

TEST_CASE("surjectivity at cell resolution", "[curves]") {
  const int p = 7;
  const SpaceCurve c = build_hilbert(Box(Point{-1.0, 2.0}, Point{3.0, 4.0}), p);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(-1.0, 3.0), uy(2.0, 4.0);
  const double cell = c.cell_diameter();
  for (int i = 0; i < 10000; ++i) {
    const Point x{ux(rng), uy(rng)};
    const Point back = c.eval(c.right_inverse(x));
    REQUIRE(momtrans::inf_dist(back, x) <= cell);
  }
}

TEST_CASE("three-dimensional indexing invariants", "[curves]") {
  using namespace momtrans::curves::detail;
  for (int p = 1; p <= 3; ++p) {
    std::vector<bool> seen(total_cells(p, 3), false);
    CellCoord prev{};
    for (std::uint64_t h = 0; h < total_cells(p, 3); ++h) {
      const CellCoord cc = cell_of_index(h, p, 3);
      const std::uint64_t side = std::uint64_t{1} << p;
      std::uint64_t flat = 0;
      for (int i = 0; i < 3; ++i) {
        REQUIRE(cc[static_cast<std::size_t>(i)] < side);
        flat = flat * side + cc[static_cast<std::size_t>(i)];
      }
      REQUIRE(!seen[flat]);
      seen[flat] = true;
      REQUIRE(index_of_cell(cc, p, 3) == h);
      if (h > 0) {  // consecutive cells share a face
        std::uint64_t manhattan = 0;
        for (int i = 0; i < 3; ++i) {
          const auto a = cc[static_cast<std::size_t>(i)], b = prev[static_cast<std::size_t>(i)];
          manhattan += a > b ? a - b : b - a;
        }
        REQUIRE(manhattan == 1);
      }
      prev = cc;
      // nesting across depths
      if (p > 1) {
        const CellCoord coarse = cell_of_index(h >> 3, p - 1, 3);
        for (int i = 0; i < 3; ++i)
          REQUIRE((cc[static_cast<std::size_t>(i)] >> 1) == coarse[static_cast<std::size_t>(i)]);
      }
    }
    // junction chain: exit corner of h equals entry corner of h+1
    for (std::uint64_t h = 0; h + 1 < total_cells(p, 3); ++h) {
      const CellGeometry a = cell_geometry(h, p, 3);
      const CellGeometry b = cell_geometry(h + 1, p, 3);
      for (int i = 0; i < 3; ++i)
        REQUIRE(a.exit[static_cast<std::size_t>(i)] == b.entry[static_cast<std::size_t>(i)]);
    }
  }

  const SpaceCurve c = build_hilbert(Box::unit(3), 3);
  REQUIRE(c.eval(0.0) == (Point{0.0, 0.0, 0.0}));
  const double scale = std::ldexp(1.0, 9);
  for (std::uint64_t h = 0; h < total_cells(3, 3); ++h) {
    const double tstar = (static_cast<double>(h) + 0.5) / scale;
    REQUIRE(c.right_inverse(c.eval(tstar)) == tstar);
  }
}

TEST_CASE("one-dimensional curve is the identity scaled to the box", "[curves]") {
  const SpaceCurve c = build_hilbert(Box(Point{2.0}, Point{4.0}), 5);
  REQUIRE(c.eval(0.0)[0] == 2.0);
  REQUIRE(c.eval(1.0)[0] == 4.0);
  REQUIRE(c.eval(0.5)[0] == 3.0);
  const double t = c.right_inverse(Point{3.25});
  REQUIRE(c.eval(t)[0] == Catch::Approx(3.25).margin(c.cell_diameter()));
}

TEST_CASE("segmented domains", "[curves]") {
  const Box b1(Point{0.0, 0.0}, Point{1.0, 1.0});
  const Box b2(Point{2.0, 0.0}, Point{3.0, 1.0});
  const Box b3(Point{4.0, 0.0}, Point{5.0, 1.0});

  SECTION("single component matches build_hilbert bit for bit") {
    const SpaceCurve seg = build_segmented({b1}, 6);
    const SpaceCurve hil = build_hilbert(b1, 6);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      const double t = u(rng);
      REQUIRE(seg.eval(t) == hil.eval(t));
    }
  }

  SECTION("interval layout") {
    const SpaceCurve seg3 = build_segmented({b1, b2, b3}, 4);
    for (int i = 0; i < 3; ++i) {
      auto [a, b] = seg3.domain_interval(i);
      REQUIRE(b - a == Catch::Approx(0.2));  // 1/(2k-1) with k = 3
      REQUIRE(a >= 0.0);
      REQUIRE(b <= 1.0);
    }
    const SpaceCurve raw = build_segmented({b1, b2, b3}, 4, /*normalized=*/false);
    auto [a2, b2i] = raw.domain_interval(1);
    REQUIRE(a2 == 2.0);
    REQUIRE(b2i == 3.0);
  }

  SECTION("gaps are outside the domain") {
    const SpaceCurve seg2 = build_segmented({b1, b2}, 4);
    REQUIRE_THROWS_AS(seg2.eval(0.5), momtrans::input_error);  // gap (1/3, 2/3)
    REQUIRE_NOTHROW(seg2.eval(1.0 / 3.0));
  }

  SECTION("second component inverts into [2/3, 1]") {
    const SpaceCurve seg2 = build_segmented({b1, b2}, 6);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const Point x{2.0 + u(rng), u(rng)};
      const double t = seg2.right_inverse(x);
      REQUIRE(t >= 2.0 / 3.0);
      REQUIRE(t <= 1.0);
    }
  }

  SECTION("cell-center round trips stay bit-exact through the rescaling") {
    const int p = 5;
    const SpaceCurve seg2 = build_segmented({b1, b2}, p);
    const double scale = std::ldexp(1.0, 2 * p);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> hs(0, (std::uint64_t{1} << (2 * p)) - 1);
    for (int rep = 0; rep < 300; ++rep) {
      const std::uint64_t h = hs(rng);
      for (int comp = 0; comp < 2; ++comp) {
        auto [a, b] = seg2.domain_interval(comp);
        const double t = a + ((static_cast<double>(h) + 0.5) / scale) * (b - a);
        const Point x = seg2.eval(t);
        const Point again = seg2.eval(seg2.right_inverse(x));
        REQUIRE(again == x);
      }
    }
  }

  SECTION("overlapping components are rejected") {
    REQUIRE_THROWS_AS(build_segmented({b1, Box(Point{0.5, 0.5}, Point{1.5, 1.5})}, 4),
                      momtrans::input_error);
  }
}

TEST_CASE("annular curve", "[curves]") {
  const double eps = 0.5;
  const SpaceCurve c = build_annular(eps, 3.0, 6);

  SECTION("origin and joints") {
    const Point o = c.eval(0.0);
    REQUIRE(o.norm2() <= eps);
    REQUIRE(o[0] == 0.0);
    REQUIRE(o[1] == 0.0);
    for (int k = 1; k <= 6; ++k) {
      const double t = k * eps;
      REQUIRE(c.eval(t).norm2() == t);  // joint radius is exact
    }
  }

  SECTION("norm envelope, exact inequality") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int i = 0; i < 5000; ++i) {
      const double t = u(rng);
      const double r = c.eval(t).norm2();
      REQUIRE(t - eps <= r);
      REQUIRE(r <= t + eps);
    }
    // spec landmark: t = 2 stays within [1.5, 2.5]
    const double r2 = c.eval(2.0).norm2();
    REQUIRE(r2 >= 1.5);
    REQUIRE(r2 <= 2.5);
  }

  SECTION("right inverse envelope, exact inequality") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int kept = 0;
    while (kept < 5000) {
      const Point x{u(rng), u(rng)};
      if (x.norm2() > 3.0) continue;
      ++kept;
      const double g = c.right_inverse(x);
      REQUIRE(x.norm2() - eps <= g);
      REQUIRE(g <= x.norm2() + eps);
      REQUIRE(c.right_inverse(x) == g);
    }
  }

  SECTION("continuity across a joint") {
    const double t = 2.0;
    const double d = momtrans::inf_dist(c.eval(t - 1e-12), c.eval(t + 1e-12));
    REQUIRE(d <= c.cell_diameter());
  }

  SECTION("invalid build parameters") {
    REQUIRE_THROWS_AS(build_annular(0.5, 1.3, 4), momtrans::input_error);
    REQUIRE_THROWS_AS(build_annular(-0.5, 1.0, 4), momtrans::input_error);
  }
}

TEST_CASE("builder validation", "[curves]") {
  REQUIRE_THROWS_AS(build_hilbert(Box::unit(2), 0), momtrans::config_error);
  REQUIRE_THROWS_AS(build_hilbert(Box::unit(2), 40), momtrans::config_error);
  REQUIRE_THROWS_AS(Box(Point{1.0, 0.0}, Point{0.0, 1.0}), momtrans::input_error);
}
