#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "momtrans/mapfn.hpp"
#include "momtrans/measures.hpp"

namespace momtrans::measures {

// Normalized CDF F(t) = nu([0,t]) / nu([0,1]) of a one-dimensional measure
// supported in [0,1], together with its left-continuous generalized inverse
// Q(u) = inf { t : F(t) >= u }. F is right-continuous; Q(0) is the smallest
// support point. Both are monotone non-decreasing by construction.
class CdfQuantile {
 public:
  explicit CdfQuantile(const Measure& nu) {
    if (nu.dim() != 1) throw input_error("cdf_and_quantile: measure must be one-dimensional");
    build(nu);
    if (!(mass_ > 0.0)) throw input_error("cdf_and_quantile: zero-mass measure");
  }

  double mass() const { return mass_; }

  double cdf(double t) const {
    if (t < segs_.front().t0) return 0.0;
    // rightmost segment whose start is <= t; jumps at t are included
    std::size_t lo = 0, hi = segs_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (segs_[mid].t0 <= t)
        lo = mid;
      else
        hi = mid;
    }
    // several segments can share t0 (a jump between flats): take the last
    while (lo + 1 < segs_.size() && segs_[lo + 1].t0 <= t) ++lo;
    const Seg& s = segs_[lo];
    if (s.t1 <= s.t0) return s.f1 / mass_;  // jump, right-closed
    const double f = t >= s.t1 ? s.f1 : s.f0 + (s.f1 - s.f0) * (t - s.t0) / (s.t1 - s.t0);
    return f / mass_;
  }

  double quantile(double u) const {
    const double target = std::clamp(u, 0.0, 1.0) * mass_;
    if (target <= 0.0) return first_support_;
    for (const Seg& s : segs_) {
      if (s.f1 >= target) {
        if (s.t1 <= s.t0 || target <= s.f0) return s.t0;
        return s.t0 + (s.t1 - s.t0) * (target - s.f0) / (s.f1 - s.f0);
      }
    }
    return segs_.back().t1;
  }

  MapFn cdf_map() const {
    MapFn m;
    m.in_dim = m.out_dim = 1;
    m.name = "cdf";
    m.domain = Box::unit(1);
    auto self = *this;
    m.fn = [self](const Point& x) { return Point::scalar(self.cdf(x[0])); };
    return m;
  }

  MapFn quantile_map() const {
    MapFn m;
    m.in_dim = m.out_dim = 1;
    m.name = "quantile";
    m.domain = Box::unit(1);
    auto self = *this;
    m.fn = [self](const Point& x) { return Point::scalar(self.quantile(x[0])); };
    return m;
  }

 private:
  struct Seg {
    double t0, t1;  // t0 == t1 marks a jump
    double f0, f1;  // unnormalized CDF values at the ends
  };

  void build(const Measure& nu) {
    std::vector<Atom> atoms = nu.atoms();
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.point[0] < b.point[0]; });
    for (const auto& a : atoms)
      if (a.point[0] < -1e-12 || a.point[0] > 1.0 + 1e-12)
        throw input_error("cdf_and_quantile: support must lie inside [0,1]");

    // density knots: piecewise-linear CDF contribution
    std::vector<double> knot_t{0.0};
    std::vector<double> knot_rate;  // rate on [knot_t[i], knot_t[i+1]]
    switch (nu.kind()) {
      case Measure::Kind::lebesgue_unit:
      case Measure::Kind::mixture:
        knot_t.push_back(1.0);
        knot_rate.push_back(nu.lebesgue_coeff());
        break;
      case Measure::Kind::grid_density: {
        const auto& g = nu.density();
        if (g.box.lo[0] < -1e-12 || g.box.hi[0] > 1.0 + 1e-12)
          throw input_error("cdf_and_quantile: support must lie inside [0,1]");
        knot_t.clear();
        const int cells = g.shape[0];
        for (int c = 0; c <= cells; ++c)
          knot_t.push_back(g.box.lo[0] + c * g.cell_width(0));
        for (int c = 0; c < cells; ++c) knot_rate.push_back(g.values[static_cast<std::size_t>(c)]);
        break;
      }
      case Measure::Kind::atomic:
        knot_t.push_back(1.0);
        knot_rate.push_back(0.0);
        break;
    }

    double f = 0.0;
    std::size_t next_atom = 0;
    first_support_ = 1.0;
    bool have_support = false;
    const auto emit_jumps_until = [&](double t) {
      while (next_atom < atoms.size() && atoms[next_atom].point[0] <= t) {
        const double at = atoms[next_atom].point[0];
        if (!have_support) {
          first_support_ = at;
          have_support = true;
        }
        segs_.push_back({at, at, f, f + atoms[next_atom].weight});
        f += atoms[next_atom].weight;
        ++next_atom;
      }
    };

    if (knot_t.front() > 0.0) knot_t.insert(knot_t.begin(), 0.0), knot_rate.insert(knot_rate.begin(), 0.0);
    if (knot_t.back() < 1.0) knot_t.push_back(1.0), knot_rate.push_back(0.0);

    for (std::size_t i = 0; i + 1 < knot_t.size(); ++i) {
      const double a = knot_t[i], b = knot_t[i + 1], rate = knot_rate[i];
      // atoms strictly inside split the linear piece
      double cur = a;
      while (true) {
        emit_jumps_until(cur);
        double stop = b;
        if (next_atom < atoms.size() && atoms[next_atom].point[0] < b)
          stop = atoms[next_atom].point[0];
        if (stop > cur) {
          const double df = rate * (stop - cur);
          if (rate > 0.0 && !have_support) {
            first_support_ = cur;
            have_support = true;
          }
          segs_.push_back({cur, stop, f, f + df});
          f += df;
          cur = stop;
        }
        if (cur >= b) break;
        emit_jumps_until(cur);
      }
    }
    emit_jumps_until(1.0 + 1e-11);
    mass_ = f;
    if (!have_support) first_support_ = 0.0;
  }

  std::vector<Seg> segs_;
  double mass_ = 0.0;
  double first_support_ = 0.0;
};

inline CdfQuantile cdf_and_quantile(const Measure& nu) { return CdfQuantile(nu); }

}  // namespace momtrans::measures
