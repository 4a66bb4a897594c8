#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "momtrans/common.hpp"

namespace momtrans {

// Monomial exponent tuple for up to three variables.
struct MultiIndex {
  std::array<int, kMaxDim> a{};
  int dim = 1;

  int total() const {
    int s = 0;
    for (int i = 0; i < dim; ++i) s += a[static_cast<std::size_t>(i)];
    return s;
  }
  int operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
  std::string label() const {  // "2 0 1" style, single number for dim 1
    std::string out;
    for (int i = 0; i < dim; ++i) {
      if (i) out += ' ';
      out += std::to_string(a[static_cast<std::size_t>(i)]);
    }
    return out;
  }
  friend bool operator==(const MultiIndex& x, const MultiIndex& y) {
    return x.dim == y.dim && x.a == y.a;
  }
};

// Graded lexicographic enumeration of all monomials in n variables with
// total degree <= d: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
inline std::vector<MultiIndex> monomials_up_to(int n, int d) {
  if (n < 1 || n > kMaxDim) throw input_error("monomials_up_to: bad dimension");
  if (d < 0) throw input_error("monomials_up_to: negative degree");
  std::vector<MultiIndex> out;
  for (int deg = 0; deg <= d; ++deg) {
    MultiIndex m;
    m.dim = n;
    const auto rec = [&](const auto& self, int axis, int rem) -> void {
      if (axis == n - 1) {
        m.a[static_cast<std::size_t>(axis)] = rem;
        out.push_back(m);
        return;
      }
      for (int e = rem; e >= 0; --e) {
        m.a[static_cast<std::size_t>(axis)] = e;
        self(self, axis + 1, rem - e);
      }
    };
    rec(rec, 0, deg);
  }
  return out;
}

inline double eval_monomial(const Point& x, const MultiIndex& alpha) {
  double v = 1.0;
  for (int i = 0; i < alpha.dim; ++i) {
    double p = 1.0;
    for (int e = 0; e < alpha[i]; ++e) p *= x[i];
    v *= p;
  }
  return v;
}

// Sparse multivariate polynomial in the monomial basis.
class MultiPoly {
 public:
  struct Term {
    MultiIndex alpha;
    double coef;
  };

  MultiPoly() = default;
  MultiPoly(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
    for (const auto& t : terms_)
      if (t.alpha.dim != dim_) throw input_error("MultiPoly: term dimension mismatch");
  }

  static MultiPoly monomial(const MultiIndex& alpha, double coef = 1.0) {
    return MultiPoly(alpha.dim, {{alpha, coef}});
  }
  static MultiPoly constant(int dim, double c) {
    MultiIndex one;
    one.dim = dim;
    return MultiPoly(dim, {{one, c}});
  }

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  int degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.alpha.total());
    return d;
  }

  double operator()(const Point& x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coef * eval_monomial(x, t.alpha);
    return s;
  }

 private:
  int dim_ = 1;
  std::vector<Term> terms_;
};

// Dense univariate polynomial, coefficient c[k] on x^k.
struct UniPoly {
  std::vector<double> c;

  int degree() const { return c.empty() ? 0 : static_cast<int>(c.size()) - 1; }
  double operator()(double x) const {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
  }
  UniPoly operator*(const UniPoly& o) const {
    if (c.empty() || o.c.empty()) return {};
    UniPoly r;
    r.c.assign(c.size() + o.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
};

}  // namespace momtrans
