#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "momtrans/common.hpp"
#include "momtrans/curves.hpp"
#include "momtrans/polynomial.hpp"

namespace momtrans {

// A registered map handle: measurable function between Euclidean pieces,
// with optional domain metadata used for composition checks.
struct MapFn {
  int in_dim = 0;
  int out_dim = 0;
  std::function<Point(const Point&)> fn;
  std::string name;
  std::optional<Box> domain;                     // bounding box of the domain
  std::function<bool(const Point&)> in_domain;   // finer membership, optional

  Point operator()(const Point& x) const {
    if (!fn) throw input_error("unregistered function handle '" + name + "'");
    if (x.dim != in_dim)
      throw domain_error("map '" + name + "': point dimension " + std::to_string(x.dim) +
                         ", expected " + std::to_string(in_dim));
    return fn(x);
  }

  double scalar(const Point& x) const {
    if (out_dim != 1) throw input_error("map '" + name + "' is not scalar-valued");
    return (*this)(x)[0];
  }
};

inline MapFn identity_map(int n) {
  MapFn m;
  m.in_dim = m.out_dim = n;
  m.name = "id";
  m.fn = [](const Point& x) { return x; };
  return m;
}

inline MapFn curve_eval_map(const curves::SpaceCurve& c) {
  MapFn m;
  m.in_dim = 1;
  m.out_dim = c.dim();
  m.name = "curve_eval";
  const double end = c.domain_kind() == curves::SpaceCurve::DomainKind::half_line
                         ? c.outer_radius()
                         : (c.normalized_intervals() ? 1.0 : c.domain_interval(c.component_count() - 1).second);
  m.domain = Box(Point{0.0}, Point{end});
  m.in_domain = [&c](const Point& t) { return c.domain_contains(t[0]); };
  m.fn = [&c](const Point& t) { return c.eval(t[0]); };
  return m;
}

inline MapFn right_inverse_map(const curves::SpaceCurve& c) {
  MapFn m;
  m.in_dim = c.dim();
  m.out_dim = 1;
  m.name = "right_inverse";
  if (c.domain_kind() == curves::SpaceCurve::DomainKind::half_line) {
    const double r = c.outer_radius();
    m.domain = Box(Point{-r, -r}, Point{r, r});
  } else {
    Point lo = c.component(0).lo, hi = c.component(0).hi;
    for (int i = 1; i < c.component_count(); ++i)
      for (int k = 0; k < c.dim(); ++k) {
        lo[k] = std::min(lo[k], c.component(i).lo[k]);
        hi[k] = std::max(hi[k], c.component(i).hi[k]);
      }
    m.domain = Box(lo, hi);
  }
  m.in_domain = [&c](const Point& x) { return c.target_contains(x); };
  m.fn = [&c](const Point& x) { return Point::scalar(c.right_inverse(x)); };
  return m;
}

inline MapFn polynomial_map(const MultiPoly& p) {
  MapFn m;
  m.in_dim = p.dim();
  m.out_dim = 1;
  m.name = "polynomial";
  m.fn = [p](const Point& x) { return Point::scalar(p(x)); };
  return m;
}

// Composition outer . inner with a sampled-grid domain check: the image of
// inner must land inside outer's declared domain wherever both sides carry
// domain metadata.
inline MapFn compose(const MapFn& outer, const MapFn& inner) {
  if (inner.out_dim != outer.in_dim)
    throw input_error("compose: inner produces dim " + std::to_string(inner.out_dim) +
                      ", outer consumes dim " + std::to_string(outer.in_dim));
  if (inner.domain && outer.domain) {
    const Box& d = *inner.domain;
    const int per_axis = d.dim() == 1 ? 65 : (d.dim() == 2 ? 17 : 9);
    Point x = Point::zeros(d.dim());
    std::array<int, kMaxDim> idx{};
    const auto walk = [&](const auto& self, int axis) -> void {
      if (axis == d.dim()) {
        if (inner.in_domain && !inner.in_domain(x)) return;
        const Point y = inner(x);
        const bool ok = outer.in_domain ? outer.in_domain(y)
                                         : outer.domain->contains(y, curves::kDomainTol);
        if (!ok)
          throw domain_error("compose: image of '" + inner.name + "' leaves domain of '" +
                             outer.name + "'");
        return;
      }
      for (idx[static_cast<std::size_t>(axis)] = 0; idx[static_cast<std::size_t>(axis)] < per_axis;
           ++idx[static_cast<std::size_t>(axis)]) {
        const double f = static_cast<double>(idx[static_cast<std::size_t>(axis)]) / (per_axis - 1);
        x[axis] = d.lo[axis] + f * d.width(axis);
        self(self, axis + 1);
      }
    };
    walk(walk, 0);
  }
  MapFn m;
  m.in_dim = inner.in_dim;
  m.out_dim = outer.out_dim;
  m.name = outer.name + "." + inner.name;
  m.domain = inner.domain;
  m.in_domain = inner.in_domain;
  auto in = inner, out = outer;
  m.fn = [in = std::move(in), out = std::move(out)](const Point& x) { return out(in(x)); };
  return m;
}

}  // namespace momtrans
