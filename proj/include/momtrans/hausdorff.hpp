#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "momtrans/common.hpp"
#include "momtrans/measures.hpp"
#include "momtrans/polynomial.hpp"

namespace momtrans::hausdorff {

inline constexpr double kDefaultTolPsd = 1e-9;
inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultTolRec = 1e-8;

// Certificate for the truncated [0,1] problem. Accept requires positive
// semidefiniteness of the Hankel matrix, both shifted localizers, the
// product localizer for x(1-x) where the even truncation provides it, and
// non-negativity of all alternating finite differences. On reject, `witness`
// is a polynomial non-negative on [0,1] whose functional value is negative.
struct HausdorffCertificate {
  bool accept = false;
  std::array<double, 3> hankel_min_eigs{};        // H, H_x, H_{1-x}
  std::optional<double> product_localizer_eig;    // H_{x(1-x)}, present for d >= 2
  double monotonicity_min = 0.0;                  // min over (-1)^k Delta^k m_j
  std::optional<UniPoly> witness;
  double witness_value = 0.0;
  double tol_psd = kDefaultTolPsd;
  double m0 = 0.0;
};

struct StieltjesCertificate {
  bool accept = false;
  double hankel_min_eig = 0.0;
  double shifted_min_eig = 0.0;
};

// Finitely atomic measure on [0,1] matching a moment table.
struct AtomicReconstruction {
  std::vector<double> nodes;
  std::vector<double> weights;
  int matched_degree = 0;

  measures::Measure as_measure() const {
    std::vector<measures::Atom> atoms;
    atoms.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      atoms.push_back({Point::scalar(nodes[i]), weights[i]});
    return measures::Measure::atomic(std::move(atoms));
  }
};

namespace detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Hankel block (m_{i+j+shift}) of the largest size the table supports.
inline MatrixXd hankel(const std::vector<double>& m, int shift, int size) {
  MatrixXd h(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) h(i, j) = m[static_cast<std::size_t>(i + j + shift)];
  return h;
}

inline MatrixXd hankel_diff(const std::vector<double>& m, int shift, int size) {
  MatrixXd h(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      h(i, j) = m[static_cast<std::size_t>(i + j + shift)] -
                m[static_cast<std::size_t>(i + j + shift + 1)];
  return h;
}

struct EigInfo {
  double min_eig = 0.0;
  VectorXd min_vec;
};

inline EigInfo min_eig(const MatrixXd& h) {
  EigInfo out;
  if (h.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  out.min_eig = es.eigenvalues()(0);
  out.min_vec = es.eigenvectors().col(0);
  return out;
}

// (coefficient vector v) -> (sum v_i x^i)^2 * factor
inline UniPoly square_times(const VectorXd& v, const UniPoly& factor) {
  UniPoly q;
  q.c.assign(static_cast<std::size_t>(v.size()), 0.0);
  for (int i = 0; i < v.size(); ++i) q.c[static_cast<std::size_t>(i)] = v(i);
  return q * q * factor;
}

inline UniPoly factor_one() { return UniPoly{{1.0}}; }
inline UniPoly factor_x() { return UniPoly{{0.0, 1.0}}; }
inline UniPoly factor_one_minus_x() { return UniPoly{{1.0, -1.0}}; }
inline UniPoly factor_x_one_minus_x() { return UniPoly{{0.0, 1.0, -1.0}}; }

// x^j (1-x)^k expanded in the monomial basis.
inline UniPoly bernstein_factor(int j, int k) {
  UniPoly p{{1.0}};
  for (int i = 0; i < j; ++i) p = p * factor_x();
  for (int i = 0; i < k; ++i) p = p * factor_one_minus_x();
  return p;
}

inline double apply_functional(const std::vector<double>& m, const UniPoly& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.c.size(); ++i) s += p.c[i] * m[i];
  return s;
}

}  // namespace detail

// Truncated Hausdorff certificate for the table (m_0, ..., m_d).
inline HausdorffCertificate check_hausdorff(const measures::MomentSequence& m,
                                            double tol_psd = kDefaultTolPsd) {
  if (m.dim != 1) throw input_error("check_hausdorff: one-dimensional tables only");
  if (m.values.empty()) throw input_error("check_hausdorff: empty moment table");
  if (!(m.values[0] > 0.0)) throw input_error("check_hausdorff: m_0 must be positive");
  if (!(tol_psd > 0.0)) throw config_error("check_hausdorff: tol_psd must be positive");
  const int d = static_cast<int>(m.values.size()) - 1;
  const auto& mv = m.values;

  HausdorffCertificate cert;
  cert.tol_psd = tol_psd;
  cert.m0 = mv[0];
  const double band = tol_psd * mv[0];

  const detail::EigInfo eH = detail::min_eig(detail::hankel(mv, 0, d / 2 + 1));
  const detail::EigInfo eX =
      d >= 1 ? detail::min_eig(detail::hankel(mv, 1, (d + 1) / 2)) : detail::EigInfo{};
  const detail::EigInfo eOneMinus =
      d >= 1 ? detail::min_eig(detail::hankel_diff(mv, 0, (d + 1) / 2)) : detail::EigInfo{};
  const detail::EigInfo eProd =
      d >= 2 ? detail::min_eig(detail::hankel_diff(mv, 1, d / 2)) : detail::EigInfo{};
  cert.hankel_min_eigs = {eH.min_eig, eX.min_eig, eOneMinus.min_eig};
  if (d >= 2) cert.product_localizer_eig = eProd.min_eig;

  bool psd_ok = eH.min_eig >= -band && eX.min_eig >= -band && eOneMinus.min_eig >= -band;
  if (d >= 2) psd_ok = psd_ok && eProd.min_eig >= -band;

  // alternating finite differences: (-1)^k Delta^k m_j = L(x^j (1-x)^k) >= 0
  double mono_min = std::numeric_limits<double>::infinity();
  int mono_j = 0, mono_k = 0;
  std::vector<double> diff = mv;
  for (int k = 0; k <= d; ++k) {
    for (int j = 0; j + k <= d; ++j) {
      const double val = (k % 2 == 0) ? diff[static_cast<std::size_t>(j)]
                                      : -diff[static_cast<std::size_t>(j)];
      if (val < mono_min) {
        mono_min = val;
        mono_j = j;
        mono_k = k;
      }
    }
    for (int j = 0; j + k + 1 <= d; ++j)
      diff[static_cast<std::size_t>(j)] =
          diff[static_cast<std::size_t>(j + 1)] - diff[static_cast<std::size_t>(j)];
  }
  cert.monotonicity_min = mono_min;
  const bool mono_ok = mono_min >= -band;

  // The PSD block implies every alternating difference up to a coefficient
  // factor of at most 4^{d/2}; a clean PSD accept alongside a difference
  // violation beyond that factor cannot come from the data.
  if (psd_ok && !mono_ok && mono_min < -band * std::pow(4.0, d / 2 + 2))
    throw consistency_error("check_hausdorff: PSD criteria accept but difference " +
                            std::to_string(mono_j) + "," + std::to_string(mono_k) +
                            " is far negative: " + std::to_string(mono_min));

  cert.accept = psd_ok && mono_ok;
  if (!cert.accept) {
    // witness: most negative violation, eigenvector route for matrices,
    // x^j (1-x)^k for difference violations
    double worst = 0.0;
    UniPoly poly;
    const auto consider_eig = [&](const detail::EigInfo& e, const UniPoly& factor) {
      if (e.min_vec.size() == 0) return;
      if (e.min_eig < worst) {
        worst = e.min_eig;
        poly = detail::square_times(e.min_vec, factor);
      }
    };
    consider_eig(eH, detail::factor_one());
    if (d >= 1) consider_eig(eX, detail::factor_x());
    if (d >= 1) consider_eig(eOneMinus, detail::factor_one_minus_x());
    if (d >= 2) consider_eig(eProd, detail::factor_x_one_minus_x());
    if (mono_min < worst) {
      worst = mono_min;
      poly = detail::bernstein_factor(mono_j, mono_k);
    }
    cert.witness = poly;
    cert.witness_value = detail::apply_functional(mv, poly);
  }
  return cert;
}

// Truncated Stieltjes ([0,infinity)) certificate: both Hankel blocks PSD.
inline StieltjesCertificate stieltjes_check(const measures::MomentSequence& m,
                                            double tol_psd = kDefaultTolPsd) {
  if (m.dim != 1) throw input_error("stieltjes_check: one-dimensional tables only");
  if (m.values.empty()) throw input_error("stieltjes_check: empty moment table");
  if (!(m.values[0] > 0.0)) throw input_error("stieltjes_check: m_0 must be positive");
  const int d = static_cast<int>(m.values.size()) - 1;
  StieltjesCertificate cert;
  cert.hankel_min_eig = detail::min_eig(detail::hankel(m.values, 0, d / 2 + 1)).min_eig;
  cert.shifted_min_eig =
      d >= 1 ? detail::min_eig(detail::hankel(m.values, 1, (d + 1) / 2)).min_eig : 0.0;
  const double band = tol_psd * m.values[0];
  cert.accept = cert.hankel_min_eig >= -band && cert.shifted_min_eig >= -band;
  return cert;
}

namespace detail {

using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXl = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Gauss nodes/weights for r atoms from m_0..m_{2r-1}: Jacobi matrix
// J = L^{-1} H_1 L^{-T} with H = L L^T, eigenvalues are the nodes, squared
// first eigenvector components carry the weights. Extended precision keeps
// the solver error below the rounding already present in the input table.
inline bool golub_welsch(const std::vector<double>& m, int r, std::vector<long double>& nodes,
                         std::vector<long double>& weights) {
  MatrixXl h(r, r), h1(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      h(i, j) = m[static_cast<std::size_t>(i + j)];
      h1(i, j) = m[static_cast<std::size_t>(i + j + 1)];
    }
  Eigen::LLT<MatrixXl> llt(h);
  if (llt.info() != Eigen::Success) return false;
  const MatrixXl l = llt.matrixL();
  const MatrixXl a = l.triangularView<Eigen::Lower>().solve(h1);
  const MatrixXl j_raw = l.triangularView<Eigen::Lower>().solve(a.transpose()).transpose();
  const MatrixXl jac = 0.5L * (j_raw + j_raw.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXl> es(jac);
  if (es.info() != Eigen::Success) return false;
  nodes.resize(static_cast<std::size_t>(r));
  weights.resize(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const long double q0 = es.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = m[0] * q0 * q0;
  }
  return true;
}

// A few Newton steps on the moment-matching system; keeps a step only while
// the residual improves and the iterate stays meaningful.
inline void newton_polish(const std::vector<double>& m, std::vector<long double>& nodes,
                          std::vector<long double>& weights) {
  const int r = static_cast<int>(nodes.size());
  const int eqs = 2 * r;
  const auto residual = [&](const std::vector<long double>& t,
                            const std::vector<long double>& w) {
    VectorXl res(eqs);
    for (int j = 0; j < eqs; ++j) {
      long double s = 0.0L;
      for (int i = 0; i < r; ++i)
        s += w[static_cast<std::size_t>(i)] * powl(t[static_cast<std::size_t>(i)], j);
      res(j) = s - static_cast<long double>(m[static_cast<std::size_t>(j)]);
    }
    return res;
  };
  std::vector<long double> t = nodes, w = weights;
  VectorXl res = residual(t, w);
  long double best = res.norm();
  for (int iter = 0; iter < 6; ++iter) {
    MatrixXl jac(eqs, eqs);
    for (int j = 0; j < eqs; ++j)
      for (int i = 0; i < r; ++i) {
        const long double ti = t[static_cast<std::size_t>(i)];
        jac(j, i) = j == 0 ? 0.0L : j * w[static_cast<std::size_t>(i)] * powl(ti, j - 1);
        jac(j, r + i) = powl(ti, j);
      }
    const VectorXl step = jac.colPivHouseholderQr().solve(res);
    std::vector<long double> t2 = t, w2 = w;
    for (int i = 0; i < r; ++i) {
      t2[static_cast<std::size_t>(i)] -= step(i);
      w2[static_cast<std::size_t>(i)] -= step(r + i);
    }
    const VectorXl res2 = residual(t2, w2);
    if (!(res2.norm() < best)) break;
    bool sane = true;
    for (int i = 0; i < r; ++i)
      sane = sane && w2[static_cast<std::size_t>(i)] > 0.0L &&
             t2[static_cast<std::size_t>(i)] > -0.1L && t2[static_cast<std::size_t>(i)] < 1.1L;
    if (!sane) break;
    t = t2;
    w = w2;
    res = res2;
    best = res2.norm();
  }
  nodes = t;
  weights = w;
}

}  // namespace detail

// Finitely atomic representing measure from an accepted table: at most
// ceil((d+1)/2) atoms, nodes in [0,1], weights positive, atom count set by
// the numerical rank of the Hankel matrix.
inline AtomicReconstruction reconstruct(const measures::MomentSequence& m,
                                        double rank_tol = kDefaultRankTol) {
  if (m.dim != 1) throw input_error("reconstruct: one-dimensional tables only");
  if (m.values.size() < 2)
    throw input_error("reconstruct: need at least m_0 and m_1");
  const HausdorffCertificate cert = check_hausdorff(m);
  if (!cert.accept)
    throw precondition_error("reconstruct: table rejected by check_hausdorff");

  const int d = static_cast<int>(m.values.size()) - 1;
  const Eigen::MatrixXd h = detail::hankel(m.values, 0, d / 2 + 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const double lam_max = es.eigenvalues().maxCoeff();
  if (!(lam_max > 0.0))
    throw reconstruction_error("reconstruct: Hankel matrix has no positive eigenvalue");
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > rank_tol * lam_max) ++rank;
  int r = std::min(rank, (d + 1) / 2);
  r = std::max(r, 1);

  std::vector<long double> nodes, weights;
  for (; r >= 1; --r) {
    if (!detail::golub_welsch(m.values, r, nodes, weights)) continue;
    detail::newton_polish(m.values, nodes, weights);
    bool ok = true;
    for (int i = 0; i < r; ++i) {
      ok = ok && weights[static_cast<std::size_t>(i)] > 0.0L;
      for (int j = i + 1; j < r; ++j)
        ok = ok && fabsl(nodes[static_cast<std::size_t>(i)] -
                         nodes[static_cast<std::size_t>(j)]) > 1e-12L;
    }
    if (ok) break;
  }
  if (r < 1)
    throw reconstruction_error("reconstruct: no positive-weight atom set found");

  AtomicReconstruction rec;
  rec.matched_degree = 2 * r - 1;
  rec.nodes.resize(static_cast<std::size_t>(r));
  rec.weights.resize(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    rec.nodes[static_cast<std::size_t>(i)] =
        std::clamp(static_cast<double>(nodes[static_cast<std::size_t>(i)]), 0.0, 1.0);
    rec.weights[static_cast<std::size_t>(i)] =
        static_cast<double>(weights[static_cast<std::size_t>(i)]);
  }

  for (int j = 0; j <= rec.matched_degree; ++j) {
    double s = 0.0;
    for (int i = 0; i < r; ++i)
      s += rec.weights[static_cast<std::size_t>(i)] *
           std::pow(rec.nodes[static_cast<std::size_t>(i)], j);
    const double err = std::abs(s - m.values[static_cast<std::size_t>(j)]);
    if (err > kDefaultTolRec * std::max(1.0, m.values[0]))
      throw reconstruction_error("reconstruct: moment " + std::to_string(j) +
                                 " mismatches by " + std::to_string(err));
  }
  return rec;
}

}  // namespace momtrans::hausdorff
