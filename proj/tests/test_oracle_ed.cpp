#include <cmath>

#include "doctest.h"
#include "fkstar/oracle_ed.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace fkstar;

namespace {

FiniteGraph finite(std::vector<std::string> v, std::vector<std::array<std::string, 2>> e) {
  GraphSpec s;
  s.core_vertices = std::move(v);
  s.core_edges = std::move(e);
  s.origin = s.core_vertices.front();
  return build_finite_graph(s);
}

FiniteGraph two_vertex() { return finite({"x", "y"}, {{"x", "y"}}); }
FiniteGraph path3() { return finite({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}}); }
FiniteGraph star3() { return finite({"O", "a", "b", "c"}, {{"O", "a"}, {"O", "b"}, {"O", "c"}}); }

// Regression constants from a 4x4 diagonalization (numpy, and the closed forms
// in oracles.hpp agree to 1e-15).
constexpr double kGround_l2_d1 = 0.4472135954999579;
constexpr double kBeta4_l2_d1 = 0.451120385349383;

}  // namespace

TEST_CASE("Hamiltonian assembly") {
  auto one = finite({"x"}, {});
  auto h = build_hamiltonian(one, 5.0, 0.7);
  REQUIRE(h.rows() == 2);
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(h);
  CHECK(es.eigenvalues()[0] == doctest::Approx(-0.7));
  CHECK(es.eigenvalues()[1] == doctest::Approx(0.7));

  auto h2 = build_hamiltonian(two_vertex(), 3.0, 0.0);
  CHECK(h2.isDiagonal());
  CHECK(h2(0, 0) == doctest::Approx(-1.5));  // |++>
  CHECK(h2(1, 1) == doctest::Approx(1.5));   // |-+>
  CHECK(h2(3, 3) == doctest::Approx(-1.5));

  auto g = star3();
  auto h4 = build_hamiltonian(g, 1.3, 0.9);
  CHECK(h4.rows() == 16);
  CHECK((h4 - h4.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  // swapping arms a and b (bits 1 and 2) leaves H unchanged
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(16);
  for (int s = 0; s < 16; ++s) {
    int b1 = (s >> 1) & 1, b2 = (s >> 2) & 1;
    perm.indices()[s] = (s & ~6) | (b1 << 2) | (b2 << 1);
  }
  DenseOperator permuted = perm * h4 * perm.transpose();
  CHECK((permuted - h4).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::SelfAdjointEigenSolver<DenseOperator> es4(h4);
  for (int k = 0; k < 16; ++k) {
    CHECK((h4 * es4.eigenvectors().col(k) - es4.eigenvalues()[k] * es4.eigenvectors().col(k)).norm() <= 1e-10);
  }

  std::vector<std::string> names;
  std::vector<std::array<std::string, 2>> edges;
  for (int i = 0; i < 13; ++i) names.push_back("v" + std::to_string(i));
  for (int i = 0; i + 1 < 13; ++i) edges.push_back({names[i], names[i + 1]});
  CHECK(code_of([&] { build_hamiltonian(finite(names, edges), 1.0, 1.0); }) == ErrorCode::kTooLarge);
}

TEST_CASE("ground-state correlations") {
  auto g = two_vertex();
  CHECK(ground_state_correlation(g, 0.0, 1.0, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ground_state_correlation(g, 1e3, 1.0, 0, 1) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ground_state_correlation(g, 2.0, 1.0, 0, 1) == doctest::Approx(kGround_l2_d1).epsilon(1e-12));
  CHECK(ground_state_correlation(g, 2.0, 1.0, 1, 1) == doctest::Approx(1.0));
  for (double l : {0.3, 1.0, 2.5, 7.0}) {
    for (double d : {0.4, 1.0, 2.0}) {
      CHECK(ground_state_correlation(g, l, d, 0, 1) ==
            doctest::Approx(oracle::two_vertex_ground_correlation(l, d)).epsilon(1e-12));
    }
  }
  // classical limit: both Ising ground states
  CHECK(code_of([&] { ground_state_correlation(g, 1.0, 0.0, 0, 1); }) == ErrorCode::kDegenerateGroundState);
  CHECK(code_of([&] { ground_state_correlation(g, 1.0, 1.0, 0, 2); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("finite-beta correlations") {
  auto g = two_vertex();
  CHECK(finite_beta_correlation(g, 2.0, 1.0, 4.0, 0, 1) == doctest::Approx(kBeta4_l2_d1).epsilon(1e-12));
  for (double beta : {0.1, 1.0, 4.0, 9.0}) {
    CHECK(finite_beta_correlation(g, 1.5, 0.8, beta, 0, 1) ==
          doctest::Approx(oracle::two_vertex_beta_correlation(1.5, 0.8, beta)).epsilon(1e-12));
  }
  CHECK(std::abs(finite_beta_correlation(g, 2.0, 1.0, 1e-6, 0, 1)) < 1e-5);
  for (auto h : {two_vertex(), star3()}) {
    double gap = spectral_gap(h, 2.0, 1.0);
    double beta = 25.0 / gap;
    CHECK(std::abs(finite_beta_correlation(h, 2.0, 1.0, beta, 0, 1) - ground_state_correlation(h, 2.0, 1.0, 0, 1)) <
          1e-6);
  }
  CHECK(code_of([&] { finite_beta_correlation(g, 1.0, 1.0, 0.0, 0, 1); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("correlations grow with lambda and stay in [-1, 1]") {
  for (auto g : {two_vertex(), path3()}) {
    int far = g.vertex_count() - 1;
    double prev = -1.0;
    for (double l = 0.1; l < 6.0; l += 0.3) {
      double c = ground_state_correlation(g, l, 1.0, 0, far);
      double cb = finite_beta_correlation(g, l, 1.0, 2.0, 0, far);
      CHECK(c >= prev - 1e-12);
      CHECK(c <= 1.0 + 1e-12);
      CHECK(cb >= -1.0);
      CHECK(cb <= 1.0);
      prev = c;
    }
  }
}
