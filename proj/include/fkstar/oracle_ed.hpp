#pragma once

#include <Eigen/Dense>

#include "fkstar/graph.hpp"

namespace fkstar {

inline constexpr int kMaxEdVertices = 12;

// H = -(lambda/2) sum_{xy} s3_x s3_y - delta sum_x s1_x on the 2^|V| product
// basis |+>, |-> of s3. Bit x of a basis index is 1 when vertex x is |->.
using DenseOperator = Eigen::MatrixXd;

// TooLarge above kMaxEdVertices vertices.
DenseOperator build_hamiltonian(const FiniteGraph& g, double lambda, double delta);

// <psi0| s3_x s3_y |psi0>. DegenerateGroundState when the lowest gap is below
// 1e-9 (relative). x, y are core vertex indices.
double ground_state_correlation(const FiniteGraph& g, double lambda, double delta, int x, int y);

// tr(exp(-beta H) s3_x s3_y) / tr(exp(-beta H)). InvalidArgument unless beta > 0.
double finite_beta_correlation(const FiniteGraph& g, double lambda, double delta, double beta, int x, int y);

// Smallest gap E1 - E0 of H.
double spectral_gap(const FiniteGraph& g, double lambda, double delta);

}  // namespace fkstar
