#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "momtrans/common.hpp"

namespace momtrans {

// Gauss-Legendre rule on [-1,1], exact for polynomials of degree 2q-1.
// Nodes by Newton iteration on P_q with Chebyshev starting guesses.
struct GaussLegendre {
  std::vector<double> nodes, weights;
};

inline GaussLegendre gauss_legendre(int q) {
  if (q < 1 || q > 128) throw config_error("gauss_legendre: order out of range");
  GaussLegendre rule;
  rule.nodes.resize(static_cast<std::size_t>(q));
  rule.weights.resize(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      if (q == 1) {
        p1 = x;
      }
      for (int j = 2; j <= q; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pq = (q == 1) ? x : p1;
      const double pq1 = (q == 1) ? 1.0 : p0;
      dp = q * (x * pq - pq1) / (x * x - 1.0);
      const double dx = pq / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(q - 1 - k)] = x;
    rule.weights[static_cast<std::size_t>(q - 1 - k)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// The same rule mapped onto [a,b].
inline GaussLegendre gauss_legendre_on(int q, double a, double b) {
  GaussLegendre rule = gauss_legendre(q);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

}  // namespace momtrans
