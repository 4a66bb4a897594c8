#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace momtrans {

// Error taxonomy. Everything user-facing derives from error so the CLI can
// map failures onto its exit-code contract.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed values, schema violations, unsupported combinations.
class input_error : public error {
 public:
  using error::error;
};

// Structurally valid but out-of-range configuration (depth, degree, tolerance).
class config_error : public error {
 public:
  using error::error;
};

// A point or parameter outside the set a map is defined on.
class domain_error : public error {
 public:
  using error::error;
};

// An operation called outside its stated precondition.
class precondition_error : public error {
 public:
  using error::error;
};

// Numerical breakdown while rebuilding an atomic measure from moments.
class reconstruction_error : public error {
 public:
  using error::error;
};

// Two redundant criteria disagreed far beyond what rounding can explain.
class consistency_error : public error {
 public:
  using error::error;
};

inline constexpr int kMaxDim = 3;

// Point in R^n, n <= 3. Value type, fixed capacity, no heap.
struct Point {
  std::array<double, kMaxDim> c{};
  int dim = 0;

  Point() = default;
  Point(std::initializer_list<double> xs) {
    if (xs.size() > kMaxDim) throw input_error("Point: dimension exceeds 3");
    dim = static_cast<int>(xs.size());
    int i = 0;
    for (double v : xs) c[static_cast<std::size_t>(i++)] = v;
  }
  static Point scalar(double x) {
    Point p;
    p.dim = 1;
    p.c[0] = x;
    return p;
  }
  static Point zeros(int n) {
    Point p;
    p.dim = n;
    return p;
  }

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i < a.dim; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    for (int i = 0; i < a.dim; ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  }

  double norm2() const {
    if (dim == 1) return std::abs(c[0]);
    if (dim == 2) return std::hypot(c[0], c[1]);
    return std::hypot(c[0], c[1], c[2]);
  }
};

inline double inf_dist(const Point& a, const Point& b) {
  double m = 0;
  for (int i = 0; i < a.dim; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Axis-aligned box in R^n.
struct Box {
  Point lo, hi;

  Box() = default;
  Box(Point l, Point h) : lo(l), hi(h) { validate(); }

  static Box unit(int n) {
    Box b;
    b.lo = Point::zeros(n);
    b.hi = Point::zeros(n);
    for (int i = 0; i < n; ++i) b.hi[i] = 1.0;
    return b;
  }

  int dim() const { return lo.dim; }
  double width(int i) const { return hi[i] - lo[i]; }

  bool contains(const Point& x, double tol = 0.0) const {
    if (x.dim != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    return true;
  }
  bool intersects(const Box& other) const {
    for (int i = 0; i < dim(); ++i)
      if (hi[i] < other.lo[i] || other.hi[i] < lo[i]) return false;
    return true;
  }

  void validate() const {
    if (lo.dim != hi.dim) throw input_error("Box: lo/hi dimension mismatch");
    if (lo.dim < 1 || lo.dim > kMaxDim)
      throw input_error("Box: ambient dimension must be 1, 2, or 3");
    for (int i = 0; i < lo.dim; ++i) {
      if (!(lo[i] < hi[i])) throw input_error("Box: degenerate (lo >= hi) on axis " + std::to_string(i));
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
        throw input_error("Box: non-finite bound");
    }
  }
};

}  // namespace momtrans
