#include "fkstar/oracle_ed.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fkstar/error.hpp"

namespace fkstar {

namespace {

void check_vertices(const FiniteGraph& g, int x, int y) {
  int n = g.vertex_count();
  if (x < 0 || y < 0 || x >= n || y >= n) throw Error(ErrorCode::kInvalidArgument, "vertex index out of range");
}

// s3_x s3_y is diagonal: +1 when the two bits agree.
Eigen::VectorXd zz_diagonal(int n, int x, int y) {
  Eigen::VectorXd d(std::size_t{1} << n);
  for (Eigen::Index s = 0; s < d.size(); ++s) d[s] = (((s >> x) ^ (s >> y)) & 1) ? -1.0 : 1.0;
  return d;
}

Eigen::SelfAdjointEigenSolver<DenseOperator> diagonalize(const FiniteGraph& g, double lambda, double delta) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(build_hamiltonian(g, lambda, delta));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kInvalidArgument, "eigensolver did not converge");
  return es;
}

}  // namespace

DenseOperator build_hamiltonian(const FiniteGraph& g, double lambda, double delta) {
  int n = g.vertex_count();
  if (n > kMaxEdVertices) {
    throw Error(ErrorCode::kTooLarge, fmt::format("{} vertices; exact diagonalization stops at {}", n, kMaxEdVertices));
  }
  if (!(lambda >= 0.0) || !(delta >= 0.0) || !std::isfinite(lambda) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda and delta must be finite and >= 0");
  }
  Eigen::Index dim = Eigen::Index{1} << n;
  DenseOperator h = DenseOperator::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (const auto& e : g.edges()) diag += (((s >> e[0]) ^ (s >> e[1])) & 1) ? 1.0 : -1.0;
    h(s, s) = 0.5 * lambda * diag;
    for (int x = 0; x < n; ++x) h(s ^ (Eigen::Index{1} << x), s) -= delta;
  }
  return h;
}

double spectral_gap(const FiniteGraph& g, double lambda, double delta) {
  auto es = diagonalize(g, lambda, delta);
  const auto& e = es.eigenvalues();
  return e.size() > 1 ? e[1] - e[0] : INFINITY;
}

double ground_state_correlation(const FiniteGraph& g, double lambda, double delta, int x, int y) {
  check_vertices(g, x, y);
  auto es = diagonalize(g, lambda, delta);
  const auto& e = es.eigenvalues();
  double scale = std::max(1.0, std::abs(e[0]));
  if (e.size() > 1 && e[1] - e[0] < 1e-9 * scale) {
    throw Error(ErrorCode::kDegenerateGroundState, fmt::format("ground state gap {:.3g}", e[1] - e[0]));
  }
  Eigen::VectorXd v = es.eigenvectors().col(0);
  return v.cwiseAbs2().dot(zz_diagonal(g.vertex_count(), x, y));
}

double finite_beta_correlation(const FiniteGraph& g, double lambda, double delta, double beta, int x, int y) {
  check_vertices(g, x, y);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::kInvalidArgument, "beta must be finite and > 0");
  auto es = diagonalize(g, lambda, delta);
  const auto& e = es.eigenvalues();
  Eigen::VectorXd zz = zz_diagonal(g.vertex_count(), x, y);
  // weights shifted by E0 so the largest is 1
  double num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    double w = std::exp(-beta * (e[k] - e[0]));
    if (w == 0.0) continue;
    num += w * es.eigenvectors().col(k).cwiseAbs2().dot(zz);
    den += w;
  }
  return num / den;
}

}  // namespace fkstar
