#include <cmath>

#include "doctest.h"
#include "fkstar/rng.hpp"
#include "fkstar/stats.hpp"
#include "helpers.hpp"

using namespace fkstar;

TEST_CASE("Kolmogorov survival function") {
  // reference values of the Kolmogorov distribution
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967).epsilon(1e-6));
  CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.04948).epsilon(1e-3));
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(kolmogorov_sf(5.0) < 1e-20);
}

TEST_CASE("two-sample tests are calibrated") {
  Rng rng(12, 0);
  int ks_reject = 0, chi_reject = 0;
  const int reps = 400;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> x(300), y(400);
    for (auto& v : x) v = rng.exponential(1.0);
    for (auto& v : y) v = rng.exponential(1.0);
    ks_reject += ks_two_sample(x, y).p_value < 0.05;
    std::vector<double> hx(10, 0.0), hy(10, 0.0);
    for (double v : x) hx[std::min(9, static_cast<int>(v * 3))] += 1;
    for (double v : y) hy[std::min(9, static_cast<int>(v * 3))] += 1;
    chi_reject += chi2_homogeneity(hx, hy).p_value < 0.05;
  }
  CHECK(ks_reject < reps * 0.09);
  CHECK(chi_reject < reps * 0.09);
  CHECK(chi_reject > reps * 0.02);

  std::vector<double> x(500), y(500);
  for (auto& v : x) v = rng.exponential(1.0);
  for (auto& v : y) v = rng.exponential(1.4);
  CHECK(ks_two_sample(x, y).p_value < 1e-4);
}

TEST_CASE("chi-square pools sparse tail bins") {
  std::vector<double> a{50, 30, 10, 3, 1, 0, 0}, b{48, 33, 9, 2, 2, 1, 0};
  auto r = chi2_homogeneity(a, b);
  CHECK(r.dof == 2.0);
  CHECK(r.p_value > 0.5);
  CHECK(code_of([&] { chi2_homogeneity(a, std::vector<double>{1, 2}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("Fisher's method") {
  std::vector<double> p{0.5};
  // one p-value combines to itself
  CHECK(fisher_combine(p).p_value == doctest::Approx(0.5));
  std::vector<double> small{0.01, 0.02, 0.03};
  CHECK(fisher_combine(small).p_value < 0.001);
  std::vector<double> bad{1.5};
  CHECK(code_of([&] { fisher_combine(bad); }) == ErrorCode::kInvalidArgument);
}
