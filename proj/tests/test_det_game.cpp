#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sparsify/det_game.hpp"
#include "sparsify/gen.hpp"
#include "sparsify/rng.hpp"

using namespace sparsify;

namespace {

double block_objective(const DensityState& st, const Matrix& Y, const Matrix& Z) {
  double lin = (st.cost_Y.array() * Y.array()).sum() +
               (st.cost_Z.array() * Z.array()).sum();
  return st.eta * lin + 2.0 * (psd_power(Y, 0.5).trace() + psd_power(Z, 0.5).trace());
}

DensityState random_state(int n, int steps, double eta, std::uint64_t seed) {
  Graph g = gen::complete_graph(n);
  auto bundle = laplacian(g);
  const double m = static_cast<double>(g.num_edges());
  const double d = g.max_degree();
  DensityState st;
  st.cost_Y = Matrix::Zero(n, n);
  st.cost_Z = Matrix::Zero(n, n);
  st.eta = eta;
  st.steps = steps;
  for (int t = 0; t < steps; ++t) {
    std::size_t i = rng::uniform_below(seed, t, 5, g.num_edges());
    const Edge& e = g.edge(i);
    Matrix CY = -bundle.L + 2 * d * Matrix::Identity(n, n);
    CY(e.a, e.a) += m;
    CY(e.b, e.b) += m;
    CY(e.a, e.b) -= m;
    CY(e.b, e.a) -= m;
    Matrix CZ = -bundle.SL + 2 * d * Matrix::Identity(n, n);
    CZ(e.a, e.a) += m;
    CZ(e.b, e.b) += m;
    CZ(e.a, e.b) += m;
    CZ(e.b, e.a) += m;
    st.cost_Y += CY;
    st.cost_Z += CZ;
  }
  return st;
}

}  // namespace

TEST_CASE("ftrl iterate on an empty history is uniform") {
  const int n = 6;
  DensityState st;
  st.cost_Y = Matrix::Zero(n, n);
  st.cost_Z = Matrix::Zero(n, n);
  st.eta = 0.01;
  auto it = ftrl_update(st);
  CHECK(it.nu == doctest::Approx(std::sqrt(2.0 * n)).epsilon(1e-9));
  CHECK((it.Y - Matrix::Identity(n, n) / (2.0 * n)).norm() < 1e-9);
  CHECK((it.Z - Matrix::Identity(n, n) / (2.0 * n)).norm() < 1e-9);
}

TEST_CASE("identity-multiple history keeps the block a multiple of I") {
  const int n = 4;
  DensityState st;
  st.cost_Y = 3.7 * Matrix::Identity(n, n);
  st.cost_Z = Matrix::Zero(n, n);
  st.eta = 0.05;
  auto it = ftrl_update(st);
  CHECK((it.Y - it.Y(0, 0) * Matrix::Identity(n, n)).norm() < 1e-10);
  CHECK((it.Z - it.Z(0, 0) * Matrix::Identity(n, n)).norm() < 1e-10);
  CHECK(it.Y.trace() + it.Z.trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(it.Y(0, 0) > it.Z(0, 0));  // positive cost block gets more mass
}

TEST_CASE("ftrl iterate has unit trace and maximizes the regularized objective") {
  const int n = 4;
  DensityState st = random_state(n, 7, 0.003, 42);
  auto it = ftrl_update(st);
  CHECK(it.Y.trace() + it.Z.trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(min_eigenvalue(it.Y) >= -1e-10);
  CHECK(min_eigenvalue(it.Z) >= -1e-10);

  const double j_star = block_objective(st, it.Y, it.Z);
  // random density matrices over the full 2n-dimensional block space,
  // plus mixtures with the iterate itself
  int beaten = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    Matrix W(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j) W(i, j) = rng::normal(7, trial, i * 8 + j);
    Matrix X = W.transpose() * W;
    if (trial % 3 == 1) {  // mixtures near the iterate
      Matrix blocks = Matrix::Zero(2 * n, 2 * n);
      blocks.topLeftCorner(n, n) = it.Y;
      blocks.bottomRightCorner(n, n) = it.Z;
      X = 0.95 * blocks * X.trace() + 0.05 * X;
    }
    X /= X.trace();
    Matrix Y = X.topLeftCorner(n, n);
    Matrix Z = X.bottomRightCorner(n, n);
    // off-block mass is ignored by the linear term only if we project; use
    // the block diagonal which is again PSD with trace <= 1
    double tr = Y.trace() + Z.trace();
    Y /= tr;
    Z /= tr;
    if (block_objective(st, Y, Z) > j_star + 1e-9) ++beaten;
  }
  CHECK(beaten == 0);
}

TEST_CASE("select_edge: symmetric state ties break lexicographically") {
  Graph c4 = Graph::unweighted(4, {{1, 2}, {0, 1}, {2, 3}, {0, 3}});
  const int n = 4;
  Matrix Y = Matrix::Identity(n, n) / 8.0, Z = Matrix::Identity(n, n) / 8.0;
  std::size_t pick = select_edge(c4, Y, Z);
  CHECK(c4.edge(pick).a == 0);
  CHECK(c4.edge(pick).b == 1);
}

TEST_CASE("select_edge avoids the direction the state is concentrated on") {
  Graph path = Graph::unweighted(3, {{0, 1}, {1, 2}});
  Matrix Y(3, 3);
  Y << 0.25, -0.25, 0, -0.25, 0.25, 0, 0, 0, 0;  // (e0 - e1) direction
  Matrix Z = Matrix::Identity(3, 3) / 6.0;
  std::size_t pick = select_edge(path, Y, Z);
  CHECK(path.edge(pick).a == 1);
  CHECK(path.edge(pick).b == 2);
}

TEST_CASE("select_edge on a single-edge graph") {
  Graph g = Graph::unweighted(2, {{0, 1}});
  Matrix Y = Matrix::Identity(2, 2) / 4.0, Z = Matrix::Identity(2, 2) / 4.0;
  CHECK(select_edge(g, Y, Z) == 0);
  Graph empty(2, {});
  CHECK_THROWS_AS(select_edge(empty, Y, Z), std::invalid_argument);
}

TEST_CASE("T >= m returns the whole edge set with exactly zero difference") {
  Graph k8 = gen::complete_graph(8);
  auto res = det_sparsify(k8, 0.25);  // T = ceil(16*8/0.0625) >> 28
  CHECK(res.trivial);
  CHECK(res.c == 1.0);
  CHECK(res.selected.size() == k8.num_edges());
  Matrix diff = laplacian(subgraph(k8, res.selected)).L - laplacian(k8).L;
  CHECK(diff.norm() == 0.0);
}

TEST_CASE("a real game run: invariants at every step") {
  Graph k10 = gen::complete_graph(10);
  DetGameConfig cfg;
  cfg.c_T = 0.1;  // T = ceil(0.1 * 10 / 0.0625) = 16 < 45
  auto res = det_sparsify(k10, 0.25, cfg);
  REQUIRE(!res.trivial);
  CHECK(res.T == 16);
  CHECK(res.selected.size() == 16);
  CHECK(res.c == doctest::Approx(45.0 / 16.0));

  const double d = 9, m = 45;
  for (const auto& step : res.transcript) {
    CHECK(step.trace_err <= 1e-8);
    CHECK(step.payoff <= 1e-8);
    CHECK(step.width <= 8.0 * std::sqrt(d * m));
    CHECK(res.eta * step.width <= 0.25 + 1e-9);
  }

  // trace identity: c * trace(D_F) = trace(D_G) = 2m
  auto df = laplacian(subgraph(k10, res.selected)).D;
  CHECK(res.c * df.sum() == doctest::Approx(2 * m).epsilon(1e-12));

  // deterministic: identical rerun picks identical edges
  auto res2 = det_sparsify(k10, 0.25, cfg);
  CHECK(res.selected == res2.selected);
}

TEST_CASE("width condition violation aborts with a diagnostic") {
  // eps = 1 drives eta * width past 1/4 on a dense instance
  Graph k10 = gen::complete_graph(10);
  DetGameConfig cfg;
  cfg.c_T = 0.1;
  CHECK_THROWS_AS(det_sparsify(k10, 1.0, cfg), WidthConditionViolated);
}

TEST_CASE("eps validation") {
  Graph g = gen::complete_graph(4);
  CHECK_THROWS_AS(det_sparsify(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(det_sparsify(g, 1.5), std::invalid_argument);
  Graph w(2, {{0, 1, 2.0}});
  CHECK_THROWS_AS(det_sparsify(w, 0.5), std::invalid_argument);
}
