#pragma once

#include <span>
#include <vector>

namespace fkstar {

struct TestResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

// Two-sample chi-square homogeneity test on histograms over the same bins.
// Adjacent bins are pooled from the top until each pooled bin expects >= 5 in
// both samples.
TestResult chi2_homogeneity(std::span<const double> a, std::span<const double> b);

// Two-sample Kolmogorov-Smirnov with the asymptotic Kolmogorov p-value
// (Stephens' small-sample correction).
TestResult ks_two_sample(std::vector<double> x, std::vector<double> y);

// Fisher's method: -2 sum log p against chi-square with 2m degrees of freedom.
TestResult fisher_combine(std::span<const double> p_values);

// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double t);

}  // namespace fkstar
