#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "sparsify/graph.hpp"

// Laplacian objects and the dense symmetric-eigenvalue utilities shared by
// the constructions and the verifier.

namespace sparsify {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline void check_dense_size(int n, const char* what) {
  if (n > kMaxDenseVertices)
    throw SizeLimitError(std::string(what) + ": n=" + std::to_string(n) +
                         " exceeds dense limit " + std::to_string(kMaxDenseVertices));
}

// L = D - A, SL = D + A, D the diagonal weighted-degree matrix.
struct LaplacianBundle {
  Matrix L;
  Matrix SL;
  Vector D;
};

inline LaplacianBundle laplacian(const Graph& g) {
  const int n = g.num_vertices();
  check_dense_size(n, "laplacian");
  Matrix A = Matrix::Zero(n, n);
  Vector d = Vector::Zero(n);
  for (const auto& e : g.edges()) {
    A(e.a, e.b) += e.w;
    A(e.b, e.a) += e.w;
    d[e.a] += e.w;
    d[e.b] += e.w;
  }
  Matrix D = d.asDiagonal();
  return {D - A, D + A, d};
}

// Laplacian of an edge index multiset, scaled entries summed with multiplicity.
inline Matrix laplacian_of_subset(const Graph& g, std::span<const std::size_t> f) {
  return laplacian(subgraph(g, f)).L;
}

inline Eigen::SelfAdjointEigenSolver<Matrix> sym_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigendecomposition failed");
  return es;
}

inline double min_eigenvalue(const Matrix& m) {
  return sym_eig(m).eigenvalues().minCoeff();
}

inline double max_eigenvalue(const Matrix& m) {
  return sym_eig(m).eigenvalues().maxCoeff();
}

// Spectral norm of a symmetric matrix.
inline double operator_norm(const Matrix& m) {
  auto ev = sym_eig(m).eigenvalues();
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

// Moore-Penrose pseudoinverse of a PSD matrix, dropping eigenvalues below
// cutoff_rel * lambda_max.
inline Matrix pinv_psd(const Matrix& m, double cutoff_rel = 1e-12) {
  auto es = sym_eig(m);
  const auto& ev = es.eigenvalues();
  double lmax = std::max(ev.maxCoeff(), 0.0);
  double cut = cutoff_rel * std::max(lmax, 1e-300);
  Vector inv = Vector::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > cut) inv[i] = 1.0 / ev[i];
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// M^p for symmetric PSD M via eigendecomposition, flooring eigenvalues at
// floor_rel * lambda_max (negative fuzz from roundoff is clamped to 0).
inline Matrix psd_power(const Matrix& m, double p, double floor_rel = 1e-14) {
  auto es = sym_eig(m);
  const auto& ev = es.eigenvalues();
  double lmax = std::max(ev.maxCoeff(), 0.0);
  double floor = floor_rel * std::max(lmax, 0.0);
  Vector pw = Vector::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double v = std::max(ev[i], floor);
    pw[i] = v > 0 ? std::pow(v, p) : 0.0;
  }
  return es.eigenvectors() * pw.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace sparsify
