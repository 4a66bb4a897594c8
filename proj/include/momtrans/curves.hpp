#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "momtrans/common.hpp"
#include "momtrans/hilbert.hpp"

namespace momtrans::curves {

// Default tolerance for membership tests, in the coordinates of the ambient
// space (target side) resp. the parameter interval (domain side).
inline constexpr double kDomainTol = 1e-9;

namespace detail {

// Evaluate the depth-p curve on the unit cube at parameter s in [0,1].
// Piecewise linear: within the visit of cell h the curve runs
// entry corner -> cell center -> exit corner. Dyadic parameters at level
// n*p land on junction corners, half-cell offsets land on cell centers,
// both exactly in double arithmetic.
inline Point unit_eval(double s, int p, int n) {
  const double scale = std::ldexp(1.0, n * p);
  const double us = s * scale;
  const double hfl = std::floor(us);
  std::uint64_t h;
  double frac;
  if (hfl >= scale) {
    h = static_cast<std::uint64_t>(scale) - 1;
    frac = 1.0;
  } else if (hfl < 0) {
    h = 0;
    frac = 0.0;
  } else {
    h = static_cast<std::uint64_t>(hfl);
    frac = us - hfl;
  }
  const CellGeometry g = cell_geometry(h, p, n);
  const double inv = std::ldexp(1.0, -(p + 1));
  Point y = Point::zeros(n);
  for (int i = 0; i < n; ++i) {
    const auto s_i = static_cast<std::size_t>(i);
    const double e2 = 2.0 * static_cast<double>(g.entry[s_i]);
    const double x2 = 2.0 * static_cast<double>(g.exit[s_i]);
    const double c2 = static_cast<double>(g.center[s_i]);
    const double v = (frac <= 0.5) ? e2 + (2.0 * frac) * (c2 - e2)
                                   : c2 + (2.0 * frac - 1.0) * (x2 - c2);
    y[i] = v * inv;
  }
  return y;
}

// Minimal parameter mapped into a cell containing u (unit-cube coordinates).
// A point on a shared cell face yields every touching cell as a candidate.
// Candidate parameter per cell: the exact junction parameter if u is that
// cell's entry or exit corner, the half-cell (center) parameter otherwise.
inline double unit_right_inverse(const Point& u, int p, int n) {
  const double scale = std::ldexp(1.0, n * p);
  const double axis_scale = std::ldexp(1.0, p);
  std::array<std::array<std::uint64_t, 2>, kMaxDim> opts{};
  std::array<int, kMaxDim> nopts{};
  std::array<double, kMaxDim> su{};
  for (int i = 0; i < n; ++i) {
    const auto s_i = static_cast<std::size_t>(i);
    su[s_i] = u[i] * axis_scale;
    double f = std::floor(su[s_i]);
    f = std::clamp(f, 0.0, axis_scale - 1.0);
    opts[s_i][0] = static_cast<std::uint64_t>(f);
    nopts[s_i] = 1;
    if (su[s_i] == f && f >= 1.0) {  // exactly on the face between two cells
      opts[s_i][1] = static_cast<std::uint64_t>(f) - 1;
      nopts[s_i] = 2;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::array<int, kMaxDim> pick{};
  const auto visit = [&](const auto& self, int axis) -> void {
    if (axis == n) {
      CellCoord cell{};
      for (int i = 0; i < n; ++i) {
        const auto s_i = static_cast<std::size_t>(i);
        cell[s_i] = opts[s_i][static_cast<std::size_t>(pick[s_i])];
      }
      const std::uint64_t h = index_of_cell(cell, p, n);
      const CellGeometry g = cell_geometry(h, p, n);
      bool at_entry = true, at_exit = true;
      for (int i = 0; i < n; ++i) {
        const auto s_i = static_cast<std::size_t>(i);
        at_entry = at_entry && (su[s_i] == static_cast<double>(g.entry[s_i]));
        at_exit = at_exit && (su[s_i] == static_cast<double>(g.exit[s_i]));
      }
      const double hd = static_cast<double>(h);
      double cand;
      if (at_entry)
        cand = hd / scale;
      else if (at_exit)
        cand = (hd + 1.0) / scale;
      else
        cand = (hd + 0.5) / scale;
      best = std::min(best, cand);
      return;
    }
    for (int j = 0; j < nopts[static_cast<std::size_t>(axis)]; ++j) {
      pick[static_cast<std::size_t>(axis)] = j;
      self(self, axis + 1);
    }
  };
  visit(visit, 0);
  return best;
}

inline double box_to_unit(double x, double lo, double wid) { return (x - lo) / wid; }
inline double unit_to_box(double u, double lo, double wid, double hi) {
  return std::clamp(lo + wid * u, lo, hi);
}

}  // namespace detail

// An explicit continuous surjection onto a finite union of boxes or a planar
// annular family, truncated at refinement depth p. Immutable after
// construction; eval and right_inverse are pure.
class SpaceCurve {
 public:
  enum class DomainKind { unit_interval, segmented, half_line };

  static SpaceCurve hilbert(const Box& box, int depth) {
    box.validate();
    SpaceCurve c;
    c.kind_ = DomainKind::unit_interval;
    c.dim_ = box.dim();
    c.depth_ = check_depth(depth, c.dim_);
    c.comps_ = {box};
    return c;
  }

  // Component i is the image of the i-th interval. With normalized = true the
  // intervals are [(2i-2)/(2k-1), (2i-1)/(2k-1)] inside [0,1]; otherwise the
  // unbounded normalization [2i-2, 2i-1].
  static SpaceCurve segmented(const std::vector<Box>& components, int depth,
                              bool normalized = true) {
    if (components.empty()) throw input_error("segmented curve: need at least one component");
    for (const auto& b : components) b.validate();
    const int n = components[0].dim();
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (components[i].dim() != n)
        throw input_error("segmented curve: mixed component dimensions");
      for (std::size_t j = i + 1; j < components.size(); ++j)
        if (components[i].intersects(components[j]))
          throw input_error("segmented curve: components overlap");
    }
    SpaceCurve c;
    c.kind_ = DomainKind::segmented;
    c.dim_ = n;
    c.depth_ = check_depth(depth, n);
    c.comps_ = components;
    c.normalized_ = normalized;
    return c;
  }

  // Planar annuli {(a-1)*eps <= |x| <= a*eps}, a = 1..m, glued at the shared
  // radii on the positive x-axis. Domain [0, outer_radius].
  static SpaceCurve annular(double epsilon, double outer_radius, int depth) {
    if (!(epsilon > 0) || !std::isfinite(epsilon))
      throw input_error("annular curve: epsilon must be positive");
    if (!(outer_radius > 0) || !std::isfinite(outer_radius))
      throw input_error("annular curve: outer_radius must be positive");
    const double m_real = outer_radius / epsilon;
    const double m_round = std::round(m_real);
    if (m_round < 1.0 || std::abs(m_real - m_round) > 1e-9 * std::max(1.0, m_real))
      throw input_error("annular curve: outer_radius must be a positive integer multiple of epsilon");
    SpaceCurve c;
    c.kind_ = DomainKind::half_line;
    c.dim_ = 2;
    c.depth_ = check_depth(depth, 2);
    c.eps_ = epsilon;
    c.outer_ = outer_radius;
    c.annuli_ = static_cast<int>(m_round);
    return c;
  }

  DomainKind domain_kind() const { return kind_; }
  int depth() const { return depth_; }
  int dim() const { return dim_; }
  int component_count() const {
    return kind_ == DomainKind::half_line ? annuli_ : static_cast<int>(comps_.size());
  }
  const Box& component(int i) const { return comps_[static_cast<std::size_t>(i)]; }
  double epsilon() const { return eps_; }
  double outer_radius() const { return outer_; }
  bool normalized_intervals() const { return normalized_; }

  // i-th closed interval of the parameter domain, 0-based.
  std::pair<double, double> domain_interval(int i) const {
    switch (kind_) {
      case DomainKind::unit_interval:
        return {0.0, 1.0};
      case DomainKind::segmented: {
        const double a = 2.0 * i, b = 2.0 * i + 1.0;
        if (!normalized_) return {a, b};
        const double den = 2.0 * static_cast<double>(comps_.size()) - 1.0;
        return {a / den, b / den};
      }
      case DomainKind::half_line:
        return {static_cast<double>(i) * eps_, (static_cast<double>(i) + 1.0) * eps_};
    }
    throw input_error("unreachable");
  }

  // Largest per-axis extent of one level-p cell.
  double cell_diameter() const {
    double w = 0;
    if (kind_ == DomainKind::half_line) {
      w = std::max(eps_, outer_ * std::numbers::pi);  // polar rectangle extents
    } else {
      for (const auto& b : comps_)
        for (int i = 0; i < dim_; ++i) w = std::max(w, b.width(i));
    }
    return std::ldexp(w, -depth_);
  }

  bool domain_contains(double t, double tol = kDomainTol) const {
    switch (kind_) {
      case DomainKind::unit_interval:
        return t >= -tol && t <= 1.0 + tol;
      case DomainKind::half_line:
        return t >= -tol && t <= outer_ + tol;
      case DomainKind::segmented: {
        for (int i = 0; i < component_count(); ++i) {
          auto [a, b] = domain_interval(i);
          if (t >= a - tol && t <= b + tol) return true;
        }
        return false;
      }
    }
    return false;
  }

  bool target_contains(const Point& x, double tol = kDomainTol) const {
    if (x.dim != dim_) return false;
    if (kind_ == DomainKind::half_line) return x.norm2() <= outer_ + tol;
    for (const auto& b : comps_)
      if (b.contains(x, tol)) return true;
    return false;
  }

  Point eval(double t) const {
    switch (kind_) {
      case DomainKind::unit_interval: {
        if (!domain_contains(t)) throw input_error("eval: parameter outside [0,1]");
        return map_to_box(comps_[0], detail::unit_eval(std::clamp(t, 0.0, 1.0), depth_, dim_));
      }
      case DomainKind::segmented: {
        auto [ci, s] = locate_segment(t);
        return map_to_box(comps_[static_cast<std::size_t>(ci)], detail::unit_eval(s, depth_, dim_));
      }
      case DomainKind::half_line: {
        if (!domain_contains(t)) throw input_error("eval: parameter outside [0, outer_radius]");
        const double tc = std::clamp(t, 0.0, outer_);
        int a = static_cast<int>(std::floor(tc / eps_)) + 1;
        a = std::clamp(a, 1, annuli_);
        const auto [tlo, thi] = domain_interval(a - 1);
        const double w = thi - tlo;
        const double s = std::clamp((tc - tlo) / w, 0.0, 1.0);
        const Point local = detail::unit_eval(s, depth_, 2);
        return polar_point(tlo, w, local[0], local[1]);
      }
    }
    throw input_error("unreachable");
  }

  // Canonical measurable section: f(right_inverse(x)) lands in the level-p
  // cell of x, and cell centers round-trip bit-exactly. Ties at shared cell
  // faces resolve to the smallest candidate parameter.
  double right_inverse(const Point& x, double tol = kDomainTol) const {
    if (x.dim != dim_) throw domain_error("right_inverse: point dimension mismatch");
    switch (kind_) {
      case DomainKind::unit_interval: {
        if (!comps_[0].contains(x, tol))
          throw domain_error("right_inverse: point outside curve target");
        return detail::unit_right_inverse(to_unit(comps_[0], x), depth_, dim_);
      }
      case DomainKind::segmented: {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < comps_.size(); ++i) {
          if (!comps_[i].contains(x, tol)) continue;
          const double s = detail::unit_right_inverse(to_unit(comps_[i], x), depth_, dim_);
          best = std::min(best, segment_param(static_cast<int>(i), s));
        }
        if (!std::isfinite(best))
          throw domain_error("right_inverse: point outside every component");
        return best;
      }
      case DomainKind::half_line: {
        const double r = x.norm2();
        if (r > outer_ + tol) throw domain_error("right_inverse: point outside outer radius");
        const double rc = std::min(r, outer_);
        double theta = std::atan2(x[1], x[0]);
        if (theta < 0) theta += 2.0 * std::numbers::pi;
        const double v = std::min(theta / (2.0 * std::numbers::pi), 1.0);

        const double jr = rc / eps_;
        const double jf = std::floor(jr);
        std::vector<int> annuli;
        annuli.push_back(std::clamp(static_cast<int>(jf) + 1, 1, annuli_));
        if (jr == jf && jf >= 1.0)  // exactly on a shared radius: lower annulus too
          annuli.push_back(std::clamp(static_cast<int>(jf), 1, annuli_));
        double best = std::numeric_limits<double>::infinity();
        for (int a : annuli) {
          const auto [tlo, thi] = domain_interval(a - 1);
          const double w = thi - tlo;
          const double u = std::clamp((rc - tlo) / w, 0.0, 1.0);
          for (int seam = 0; seam < (theta == 0.0 ? 2 : 1); ++seam) {
            Point local = Point::zeros(2);
            local[0] = u;
            local[1] = seam == 0 ? v : 1.0;  // angle 0 is also the 2*pi edge
            const double s = detail::unit_right_inverse(local, depth_, 2);
            best = std::min(best, tlo + s * w);
          }
        }
        return best;
      }
    }
    throw input_error("unreachable");
  }

 private:
  static int check_depth(int depth, int n) {
    if (depth < 1) throw config_error("curve depth must be >= 1");
    if (n * (depth + 1) > 62) throw config_error("curve depth too large for exact indexing");
    return depth;
  }

  static Point to_unit(const Box& b, const Point& x) {
    Point u = Point::zeros(b.dim());
    for (int i = 0; i < b.dim(); ++i)
      u[i] = std::clamp(detail::box_to_unit(x[i], b.lo[i], b.width(i)), 0.0, 1.0);
    return u;
  }

  static Point map_to_box(const Box& b, const Point& u) {
    Point y = Point::zeros(b.dim());
    for (int i = 0; i < b.dim(); ++i)
      y[i] = detail::unit_to_box(u[i], b.lo[i], b.width(i), b.hi[i]);
    return y;
  }

  double segment_param(int i, double s) const {
    if (!normalized_) return 2.0 * i + s;
    const double den = 2.0 * static_cast<double>(comps_.size()) - 1.0;
    return (2.0 * i + s) / den;
  }

  // Component index and local parameter for a segmented-domain t.
  // The rescaling by 2k-1 is not dyadic, so the local parameter is snapped to
  // the level-p half-cell grid when within rounding slop; this keeps
  // cell-center round trips bit-exact through the interval arithmetic.
  std::pair<int, double> locate_segment(double t) const {
    const int k = static_cast<int>(comps_.size());
    const double den = normalized_ ? 2.0 * k - 1.0 : 1.0;
    const double w = t * den;
    const double gap_tol = kDomainTol * den;
    int i = static_cast<int>(std::floor(w / 2.0)) + 1;
    i = std::clamp(i, 1, k);
    double s = w - (2.0 * i - 2.0);
    if (s < -gap_tol || s > 1.0 + gap_tol)
      throw input_error("eval: parameter in a gap of the segmented domain");
    s = std::clamp(s, 0.0, 1.0);
    if (k > 1) {
      const double half_grid = std::ldexp(1.0, dim_ * depth_ + 1);
      const double y = s * half_grid;
      const double r = std::round(y);
      const double snap_tol = std::min(1e-10 * half_grid, 0.125);
      if (std::abs(y - r) <= snap_tol && r >= 0.0 && r <= half_grid) s = r / half_grid;
    }
    return {i - 1, s};
  }

  Point polar_point(double rlo, double w, double u, double v) const {
    const double r = std::min(rlo + u * w, rlo + w);
    const double theta = 2.0 * std::numbers::pi * v;
    Point y = Point::zeros(2);
    y[0] = r * std::cos(theta);
    y[1] = r * std::sin(theta);
    return y;
  }

  DomainKind kind_ = DomainKind::unit_interval;
  int depth_ = 1;
  int dim_ = 1;
  std::vector<Box> comps_;
  bool normalized_ = true;
  double eps_ = 0.0, outer_ = 0.0;
  int annuli_ = 0;
};

// Jankoff section bound to a curve.
class RightInverse {
 public:
  explicit RightInverse(const SpaceCurve& curve) : curve_(&curve) {}
  double operator()(const Point& x) const { return curve_->right_inverse(x); }
  const SpaceCurve& curve() const { return *curve_; }

 private:
  const SpaceCurve* curve_;
};

inline SpaceCurve build_hilbert(const Box& box, int depth) {
  return SpaceCurve::hilbert(box, depth);
}
inline SpaceCurve build_segmented(const std::vector<Box>& components, int depth,
                                  bool normalized = true) {
  return SpaceCurve::segmented(components, depth, normalized);
}
inline SpaceCurve build_annular(double epsilon, double outer_radius, int depth) {
  return SpaceCurve::annular(epsilon, outer_radius, depth);
}

}  // namespace momtrans::curves
