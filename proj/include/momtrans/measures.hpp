#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "momtrans/common.hpp"
#include "momtrans/mapfn.hpp"
#include "momtrans/polynomial.hpp"
#include "momtrans/quadrature.hpp"
#include "momtrans/summation.hpp"

namespace momtrans::measures {

inline constexpr int kDefaultQuadOrder = 8;
inline constexpr int kDefaultLebesgueCells = 4096;

struct Atom {
  Point point;
  double weight = 0.0;
};

// Piecewise-constant density on a uniform grid over a box. Values row-major
// with axis 0 outermost.
struct GridDensity {
  Box box;
  std::array<int, kMaxDim> shape{};
  std::vector<double> values;

  int dim() const { return box.dim(); }
  std::int64_t cell_count() const {
    std::int64_t n = 1;
    for (int i = 0; i < dim(); ++i) n *= shape[static_cast<std::size_t>(i)];
    return n;
  }
  double cell_width(int axis) const {
    return box.width(axis) / shape[static_cast<std::size_t>(axis)];
  }
  double cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= cell_width(i);
    return v;
  }
  std::array<int, kMaxDim> cell_index(std::int64_t flat) const {
    std::array<int, kMaxDim> idx{};
    for (int i = dim() - 1; i >= 0; --i) {
      const int s = shape[static_cast<std::size_t>(i)];
      idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % s);
      flat /= s;
    }
    return idx;
  }
  Point cell_center(std::int64_t flat) const {
    const auto idx = cell_index(flat);
    Point p = Point::zeros(dim());
    for (int i = 0; i < dim(); ++i)
      p[i] = box.lo[i] + (idx[static_cast<std::size_t>(i)] + 0.5) * cell_width(i);
    return p;
  }
};

// Finite non-negative Borel measure in one of four concrete shapes.
// Immutable value type.
class Measure {
 public:
  enum class Kind { atomic, grid_density, lebesgue_unit, mixture };

  static Measure atomic(std::vector<Atom> atoms) {
    Measure m;
    m.kind_ = Kind::atomic;
    m.dim_ = atoms.empty() ? 1 : atoms[0].point.dim;
    m.atoms_ = std::move(atoms);
    m.validate_atoms();
    return m;
  }

  static Measure grid(Box box, std::vector<int> shape, std::vector<double> values) {
    Measure m;
    m.kind_ = Kind::grid_density;
    m.dim_ = box.dim();
    if (static_cast<int>(shape.size()) != m.dim_)
      throw input_error("grid density: shape rank does not match box dimension");
    std::int64_t n = 1;
    for (int i = 0; i < m.dim_; ++i) {
      if (shape[static_cast<std::size_t>(i)] < 1) throw input_error("grid density: empty axis");
      m.density_.shape[static_cast<std::size_t>(i)] = shape[static_cast<std::size_t>(i)];
      n *= shape[static_cast<std::size_t>(i)];
    }
    if (static_cast<std::int64_t>(values.size()) != n)
      throw input_error("grid density: value count does not match shape");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v)) throw input_error("grid density: negative or non-finite value");
    m.density_.box = box;
    m.density_.values = std::move(values);
    return m;
  }

  static Measure lebesgue() {
    Measure m;
    m.kind_ = Kind::lebesgue_unit;
    m.dim_ = 1;
    m.leb_coeff_ = 1.0;
    return m;
  }

  // c * (Lebesgue on [0,1]) plus a one-dimensional atomic part.
  static Measure mixture(double c, std::vector<Atom> atoms) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw input_error("mixture: negative coefficient");
    Measure m;
    m.kind_ = Kind::mixture;
    m.dim_ = 1;
    m.leb_coeff_ = c;
    m.atoms_ = std::move(atoms);
    for (const auto& a : m.atoms_)
      if (a.point.dim != 1) throw input_error("mixture: atoms must be one-dimensional");
    m.validate_atoms();
    return m;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const GridDensity& density() const { return density_; }
  double lebesgue_coeff() const { return leb_coeff_; }

  double mass() const {
    switch (kind_) {
      case Kind::atomic:
        return atom_mass();
      case Kind::lebesgue_unit:
        return 1.0;
      case Kind::mixture:
        return leb_coeff_ + atom_mass();
      case Kind::grid_density:
        return pairwise_sum(density_.values) * density_.cell_volume();
    }
    return 0.0;
  }

 private:
  double atom_mass() const {
    std::vector<double> w(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) w[i] = atoms_[i].weight;
    return pairwise_sum_sorted(std::move(w));
  }

  void validate_atoms() const {
    for (const auto& a : atoms_) {
      if (!(a.weight > 0.0) || !std::isfinite(a.weight))
        throw input_error("atom weight must be positive and finite");
      if (a.point.dim != dim_) throw input_error("atom dimension mismatch");
      for (int i = 0; i < a.point.dim; ++i)
        if (!std::isfinite(a.point[i])) throw input_error("atom coordinate not finite");
    }
    std::vector<Point> pts;
    pts.reserve(atoms_.size());
    for (const auto& a : atoms_) pts.push_back(a.point);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i] == pts[i - 1]) throw input_error("atomic points must be pairwise distinct");
  }

  Kind kind_ = Kind::atomic;
  int dim_ = 1;
  std::vector<Atom> atoms_;
  GridDensity density_;
  double leb_coeff_ = 0.0;
};

// Finite list of moments against the monomial basis: plain powers for one
// variable, graded-lex multi-indices up to the given total degree otherwise.
struct MomentSequence {
  int dim = 1;
  int degree = 0;
  std::vector<double> values;

  std::vector<MultiIndex> indices() const { return monomials_up_to(dim, degree); }
  double m0() const { return values.empty() ? 0.0 : values[0]; }
};

namespace detail {

// Exact per-cell integral of a monomial against a grid density, assembled
// from one-dimensional antiderivatives per axis.
inline double grid_monomial_integral(const GridDensity& g, const MultiIndex& alpha) {
  const int n = g.dim();
  std::array<std::vector<double>, kMaxDim> axis;  // per-axis cell integrals of x^a
  for (int i = 0; i < n; ++i) {
    const int cells = g.shape[static_cast<std::size_t>(i)];
    const int a = alpha[i];
    auto& v = axis[static_cast<std::size_t>(i)];
    v.resize(static_cast<std::size_t>(cells));
    const double w = g.cell_width(i);
    for (int c = 0; c < cells; ++c) {
      const double l = g.box.lo[i] + c * w;
      const double r = g.box.lo[i] + (c + 1) * w;
      v[static_cast<std::size_t>(c)] =
          (std::pow(r, a + 1) - std::pow(l, a + 1)) / (a + 1);
    }
  }
  const std::int64_t cells = g.cell_count();
  std::vector<double> terms(static_cast<std::size_t>(cells));
  for (std::int64_t f = 0; f < cells; ++f) {
    const auto idx = g.cell_index(f);
    double t = g.values[static_cast<std::size_t>(f)];
    for (int i = 0; i < n; ++i)
      t *= axis[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    terms[static_cast<std::size_t>(f)] = t;
  }
  return pairwise_sum(terms);
}

inline double atoms_weighted_sum(const std::vector<Atom>& atoms,
                                 const std::function<double(const Point&)>& f) {
  std::vector<double> terms(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) terms[i] = atoms[i].weight * f(atoms[i].point);
  return pairwise_sum_sorted(std::move(terms));
}

// Tensor Gauss-Legendre over every cell of a grid density.
inline double grid_quadrature(const GridDensity& g, const std::function<double(const Point&)>& f,
                              int order) {
  const int n = g.dim();
  const GaussLegendre base = gauss_legendre(order);
  const std::int64_t cells = g.cell_count();
  std::vector<double> cell_terms(static_cast<std::size_t>(cells));
  std::vector<double> node_terms;
  const int q = order;
  std::int64_t nodes_per_cell = 1;
  for (int i = 0; i < n; ++i) nodes_per_cell *= q;
  node_terms.resize(static_cast<std::size_t>(nodes_per_cell));
  for (std::int64_t c = 0; c < cells; ++c) {
    const auto idx = g.cell_index(c);
    for (std::int64_t k = 0; k < nodes_per_cell; ++k) {
      std::int64_t rem = k;
      Point x = Point::zeros(n);
      double w = g.values[static_cast<std::size_t>(c)];
      for (int i = n - 1; i >= 0; --i) {
        const int j = static_cast<int>(rem % q);
        rem /= q;
        const double width = g.cell_width(i);
        const double lo = g.box.lo[i] + idx[static_cast<std::size_t>(i)] * width;
        x[i] = lo + 0.5 * width * (base.nodes[static_cast<std::size_t>(j)] + 1.0);
        w *= 0.5 * width * base.weights[static_cast<std::size_t>(j)];
      }
      node_terms[static_cast<std::size_t>(k)] = w * f(x);
    }
    cell_terms[static_cast<std::size_t>(c)] = pairwise_sum(node_terms);
  }
  return pairwise_sum(cell_terms);
}

}  // namespace detail

// Lebesgue integral of a polynomial: exact over atoms, exact per grid cell,
// closed form against the Lebesgue part.
inline double integrate(const Measure& mu, const MultiPoly& p) {
  if (p.dim() != mu.dim()) throw input_error("integrate: integrand dimension mismatch");
  switch (mu.kind()) {
    case Measure::Kind::atomic:
      return detail::atoms_weighted_sum(mu.atoms(), [&](const Point& x) { return p(x); });
    case Measure::Kind::grid_density: {
      std::vector<double> parts(p.terms().size());
      for (std::size_t i = 0; i < p.terms().size(); ++i)
        parts[i] = p.terms()[i].coef *
                   detail::grid_monomial_integral(mu.density(), p.terms()[i].alpha);
      return pairwise_sum(parts);
    }
    case Measure::Kind::lebesgue_unit:
    case Measure::Kind::mixture: {
      std::vector<double> parts;
      parts.reserve(p.terms().size() + 1);
      for (const auto& t : p.terms())
        parts.push_back(mu.lebesgue_coeff() * t.coef / (t.alpha[0] + 1));  // int_0^1 x^a
      double s = pairwise_sum(parts);
      if (!mu.atoms().empty())
        s += detail::atoms_weighted_sum(mu.atoms(), [&](const Point& x) { return p(x); });
      return s;
    }
  }
  return 0.0;
}

// Lebesgue integral of a registered scalar map: exact over atoms, composite
// Gauss-Legendre of the given order per density cell.
inline double integrate(const Measure& mu, const MapFn& f, int quad_order = kDefaultQuadOrder) {
  if (!f.fn) throw input_error("unregistered function handle '" + f.name + "'");
  if (f.out_dim != 1) throw input_error("integrate: integrand must be scalar-valued");
  if (f.in_dim != mu.dim()) throw input_error("integrate: integrand dimension mismatch");
  const auto eval = [&](const Point& x) { return f.scalar(x); };
  switch (mu.kind()) {
    case Measure::Kind::atomic:
      return detail::atoms_weighted_sum(mu.atoms(), eval);
    case Measure::Kind::grid_density:
      return detail::grid_quadrature(mu.density(), eval, quad_order);
    case Measure::Kind::lebesgue_unit:
    case Measure::Kind::mixture: {
      GridDensity unit;
      unit.box = Box::unit(1);
      unit.shape[0] = kDefaultLebesgueCells;
      unit.values.assign(kDefaultLebesgueCells, mu.lebesgue_coeff());
      double s = mu.lebesgue_coeff() > 0.0 ? detail::grid_quadrature(unit, eval, quad_order) : 0.0;
      if (!mu.atoms().empty()) s += detail::atoms_weighted_sum(mu.atoms(), eval);
      return s;
    }
  }
  return 0.0;
}

inline MomentSequence moments(const Measure& mu, int max_degree) {
  if (max_degree < 0) throw input_error("moments: negative degree");
  MomentSequence ms;
  ms.dim = mu.dim();
  ms.degree = max_degree;
  const auto idx = monomials_up_to(ms.dim, max_degree);
  ms.values.reserve(idx.size());
  for (const auto& alpha : idx) ms.values.push_back(integrate(mu, MultiPoly::monomial(alpha)));
  return ms;
}

// Image measure under a map. Atoms map atom-by-atom, coincident images merge
// by summing weights in first-occurrence order. Continuous parts first
// discretize to cell-center atoms (their own grid; lebesgue_cells cells for
// the Lebesgue part), so the result is always atomic.
inline Measure pushforward(const Measure& mu, const MapFn& map,
                           int lebesgue_cells = kDefaultLebesgueCells) {
  if (map.in_dim != mu.dim()) throw input_error("pushforward: map dimension mismatch");
  std::vector<Atom> source;
  switch (mu.kind()) {
    case Measure::Kind::atomic:
      source = mu.atoms();
      break;
    case Measure::Kind::grid_density: {
      const auto& g = mu.density();
      const double vol = g.cell_volume();
      source.reserve(static_cast<std::size_t>(g.cell_count()));
      for (std::int64_t c = 0; c < g.cell_count(); ++c) {
        const double w = g.values[static_cast<std::size_t>(c)] * vol;
        if (w > 0.0) source.push_back({g.cell_center(c), w});
      }
      break;
    }
    case Measure::Kind::lebesgue_unit:
    case Measure::Kind::mixture: {
      if (lebesgue_cells < 1) throw input_error("pushforward: lebesgue_cells must be positive");
      const double c = mu.lebesgue_coeff();
      if (c > 0.0) {
        source.reserve(static_cast<std::size_t>(lebesgue_cells) + mu.atoms().size());
        const double w = c / lebesgue_cells;
        for (int k = 0; k < lebesgue_cells; ++k)
          source.push_back({Point::scalar((k + 0.5) / lebesgue_cells), w});
      }
      for (const auto& a : mu.atoms()) source.push_back(a);
      break;
    }
  }

  std::vector<Atom> out;
  out.reserve(source.size());
  std::map<Point, std::size_t> seen;
  for (const auto& a : source) {
    const Point y = map(a.point);
    auto [it, inserted] = seen.try_emplace(y, out.size());
    if (inserted)
      out.push_back({y, a.weight});
    else
      out[it->second].weight += a.weight;
  }
  return Measure::atomic(std::move(out));
}

// Split into the atomless part and the atom list of the representation.
inline std::pair<Measure, std::vector<Atom>> decompose_atoms(const Measure& mu) {
  switch (mu.kind()) {
    case Measure::Kind::atomic:
      return {Measure::atomic({}), mu.atoms()};
    case Measure::Kind::grid_density:
    case Measure::Kind::lebesgue_unit:
      return {mu, {}};
    case Measure::Kind::mixture:
      return {Measure::mixture(mu.lebesgue_coeff(), {}), mu.atoms()};
  }
  return {Measure::atomic({}), {}};
}

// Normal form on [0,1]: c * Lebesgue plus the atoms re-seated at 1/1, 1/2, ...
// in weight-descending order (ties by lexicographic point order). Mass is
// conserved exactly; only the representation moves.
inline Measure lebesgue_rohlin_normal_form(const Measure& mu) {
  if (!(mu.mass() > 0.0)) throw input_error("normal form: measure must have positive mass");
  auto [atomless, atoms] = decompose_atoms(mu);
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.point < b.point;
  });
  std::vector<Atom> placed;
  placed.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i)
    placed.push_back({Point::scalar(1.0 / (static_cast<double>(i) + 1.0)), atoms[i].weight});
  return Measure::mixture(atomless.mass(), std::move(placed));
}

}  // namespace momtrans::measures
