#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "sparsify/graph.hpp"
#include "sparsify/laplacian.hpp"

// Deterministic construction via an online density-matrix game. The learner
// plays follow-the-regularized-leader over block-diagonal density matrices
// (a Laplacian block Y and a signless-Laplacian block Z); the adversary
// answers with the cost of the single edge minimizing the current payoff.
// The multiset of selected edges is the sparsifier.

namespace sparsify {

class BisectionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WidthConditionViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DetGameConfig {
  double c_T = 16.0;        // T = ceil(c_T * n / eps^2)
  double eta_const = 4.0;   // eta = eps / (eta_const * sqrt(d_max * m))
  double width_kappa = 8.0; // audited bound ||X^1/4 C X^1/4|| <= kappa * sqrt(d_max m)
};

// Accumulated block-diagonal cost sum_{s<t} C_s, including the 2 d_max I
// shift (the FTRL iterate is invariant to identity shifts).
struct DensityState {
  Matrix cost_Y;
  Matrix cost_Z;
  double eta = 0;
  int steps = 0;
};

struct FtrlIterate {
  Matrix Y;
  Matrix Z;
  double nu = 0;               // scalar making trace((nu I - eta C)^-2) = 1
  Matrix Y_quarter;            // Y^{1/4}, reused by the width audit
  Matrix Z_quarter;
};

// X_t = (nu I - eta * sum C_s)^{-2} restricted per block, with nu the unique
// root of the monotone trace map. On an empty history Y = Z = I / 2n.
inline FtrlIterate ftrl_update(const DensityState& st) {
  const Eigen::Index n = st.cost_Y.rows();
  auto esY = sym_eig(st.eta * st.cost_Y);
  auto esZ = sym_eig(st.eta * st.cost_Z);
  const Vector& a = esY.eigenvalues();
  const Vector& b = esZ.eigenvalues();
  const double amax = std::max(a.maxCoeff(), b.maxCoeff());

  auto trace_at = [&](double nu) {
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double da = nu - a[i], db = nu - b[i];
      s += 1.0 / (da * da) + 1.0 / (db * db);
    }
    return s;
  };

  // trace is strictly decreasing in nu on (amax, inf); the unit-trace root
  // lies in [amax + 1, amax + sqrt(2n)].
  double lo = amax + 0.5, hi = amax + std::sqrt(2.0 * n) + 1.0;
  if (trace_at(lo) < 1.0 || trace_at(hi) > 1.0)
    throw BisectionFailure("ftrl_update: trace map does not bracket 1");
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    (trace_at(mid) >= 1.0 ? lo : hi) = mid;
  }
  const double nu = 0.5 * (lo + hi);

  FtrlIterate out;
  out.nu = nu;
  Vector ya(n), za(n), yq(n), zq(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ya[i] = 1.0 / ((nu - a[i]) * (nu - a[i]));
    za[i] = 1.0 / ((nu - b[i]) * (nu - b[i]));
    yq[i] = std::sqrt(std::sqrt(ya[i]));
    zq[i] = std::sqrt(std::sqrt(za[i]));
  }
  out.Y = esY.eigenvectors() * ya.asDiagonal() * esY.eigenvectors().transpose();
  out.Z = esZ.eigenvectors() * za.asDiagonal() * esZ.eigenvectors().transpose();
  out.Y_quarter = esY.eigenvectors() * yq.asDiagonal() * esY.eigenvectors().transpose();
  out.Z_quarter = esZ.eigenvectors() * zq.asDiagonal() * esZ.eigenvectors().transpose();
  return out;
}

// argmin over edges of Y . (m L_ab) + Z . (m SL_ab); ties go to the
// lexicographically smallest edge. `order` must list edge indices sorted by
// (a, b, index).
inline std::size_t select_edge(const Graph& g, const Matrix& Y, const Matrix& Z,
                               std::span<const std::size_t> order) {
  if (g.num_edges() == 0) throw std::invalid_argument("select_edge: empty edge set");
  const double m = static_cast<double>(g.num_edges());
  double best = 0;
  std::size_t best_idx = g.num_edges();
  for (std::size_t i : order) {
    const Edge& e = g.edge(i);
    double score = m * (Y(e.a, e.a) + Y(e.b, e.b) - 2 * Y(e.a, e.b)) +
                   m * (Z(e.a, e.a) + Z(e.b, e.b) + 2 * Z(e.a, e.b));
    if (best_idx == g.num_edges() || score < best) {
      best = score;
      best_idx = i;
    }
  }
  return best_idx;
}

inline std::size_t select_edge(const Graph& g, const Matrix& Y, const Matrix& Z) {
  std::vector<std::size_t> order(g.num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const Edge &x = g.edge(i), &y = g.edge(j);
    return std::tie(x.a, x.b, i) < std::tie(y.a, y.b, j);
  });
  return select_edge(g, Y, Z, order);
}

struct GameStep {
  std::size_t edge = 0;
  double payoff = 0;     // X_t . (block payoff) of the selected edge (<= 0)
  double width = 0;      // ||X_t^{1/4} C_t X_t^{1/4}||
  double trace_err = 0;  // |trace(Y)+trace(Z) - 1|
};

struct DetSparsifierResult {
  std::vector<std::size_t> selected;  // multiset F in selection order
  double c = 1;                       // m/T (1 on the trivial path)
  std::size_t T = 0;
  bool trivial = false;               // T >= m: F = E
  double eta = 0;
  std::vector<GameStep> transcript;
  double max_trace_err = 0;
  double max_payoff = -1e300;
  double max_width = 0;
};

inline DetSparsifierResult det_sparsify(const Graph& g, double eps,
                                        const DetGameConfig& cfg = {}) {
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("det_sparsify: eps in (0,1]");
  if (!g.is_unweighted())
    throw std::invalid_argument("det_sparsify: weighted input not supported");
  check_dense_size(g.num_vertices(), "det_sparsify");

  const std::size_t m = g.num_edges();
  const int n = g.num_vertices();
  DetSparsifierResult out;
  out.T = static_cast<std::size_t>(std::ceil(cfg.c_T * n / (eps * eps)));
  if (out.T >= m) {
    out.trivial = true;
    out.T = m;
    out.c = 1;
    out.selected.resize(m);
    std::iota(out.selected.begin(), out.selected.end(), 0);
    return out;
  }

  const double d_max = g.max_degree();
  const double md = std::sqrt(d_max * static_cast<double>(m));
  out.eta = eps / (cfg.eta_const * md);
  out.c = static_cast<double>(m) / static_cast<double>(out.T);

  auto bundle = laplacian(g);
  const Matrix& LG = bundle.L;
  const Matrix& SLG = bundle.SL;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const Edge &x = g.edge(i), &y = g.edge(j);
    return std::tie(x.a, x.b, i) < std::tie(y.a, y.b, j);
  });

  DensityState st;
  st.cost_Y = Matrix::Zero(n, n);
  st.cost_Z = Matrix::Zero(n, n);
  st.eta = out.eta;

  for (std::size_t t = 1; t <= out.T; ++t) {
    FtrlIterate it = ftrl_update(st);
    GameStep step;
    step.trace_err = std::abs(it.Y.trace() + it.Z.trace() - 1.0);

    std::size_t sel = select_edge(g, it.Y, it.Z, order);
    step.edge = sel;
    const Edge& e = g.edge(sel);
    const double mm = static_cast<double>(m);
    double score = mm * (it.Y(e.a, e.a) + it.Y(e.b, e.b) - 2 * it.Y(e.a, e.b)) +
                   mm * (it.Z(e.a, e.a) + it.Z(e.b, e.b) + 2 * it.Z(e.a, e.b));
    step.payoff = score - ((it.Y.array() * LG.array()).sum() +
                           (it.Z.array() * SLG.array()).sum());

    // Cost blocks for this step (PSD by the 2 d_max I shift).
    Matrix CY = -LG;
    CY(e.a, e.a) += mm;
    CY(e.b, e.b) += mm;
    CY(e.a, e.b) -= mm;
    CY(e.b, e.a) -= mm;
    CY += 2 * d_max * Matrix::Identity(n, n);
    Matrix CZ = -SLG;
    CZ(e.a, e.a) += mm;
    CZ(e.b, e.b) += mm;
    CZ(e.a, e.b) += mm;
    CZ(e.b, e.a) += mm;
    CZ += 2 * d_max * Matrix::Identity(n, n);

    step.width = std::max(operator_norm(it.Y_quarter * CY * it.Y_quarter),
                          operator_norm(it.Z_quarter * CZ * it.Z_quarter));
    if (out.eta * step.width > 0.25 + 1e-9)
      throw WidthConditionViolated(
          "det_sparsify: eta * width = " + std::to_string(out.eta * step.width) +
          " > 1/4 at step " + std::to_string(t));

    st.cost_Y += CY;
    st.cost_Z += CZ;
    st.steps = static_cast<int>(t);

    out.selected.push_back(sel);
    out.transcript.push_back(step);
    out.max_trace_err = std::max(out.max_trace_err, step.trace_err);
    out.max_payoff = std::max(out.max_payoff, step.payoff);
    out.max_width = std::max(out.max_width, step.width);
  }
  return out;
}

}  // namespace sparsify
