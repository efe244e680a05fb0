#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fkstar/cluster.hpp"
#include "fkstar/estimate.hpp"
#include "fkstar/graph.hpp"
#include "fkstar/region.hpp"
#include "fkstar/sampler.hpp"

namespace fkstar {

// A 0/1 (or real) function of one sample.
using Observable = std::function<double(const SampleView&)>;

// Indicators. Points are checked against the region up front
// (PointOutsideRegion); a point that lands exactly on a death counts as not
// connected.
Observable connection_indicator(const Region& r, const SpacePoint& a, const SpacePoint& b);
Observable boundary_indicator(const Region& r, const SpacePoint& a);
// Some cluster meets every side line of the region.
Observable spanning_indicator(const Region& r);

// Means of several observables over one run; one EstimateCI each.
std::vector<EstimateCI> estimate_observables(const Region& r, const RCParams& p, const Schedule& s, int chains,
                                             const std::vector<std::string>& names,
                                             const std::vector<Observable>& observables);

EstimateCI estimate_connection(const Region& r, const RCParams& p, const Schedule& s, const SpacePoint& a,
                               const SpacePoint& b, int chains = 1);

// P((origin, 0) <-> boundary of Lambda_n) under p.bc.
EstimateCI estimate_theta(const StarLikeGraph& g, std::int64_t n, const RCParams& p, const Schedule& s,
                          int chains = 1);

// P((0, 0) <-> boundary of S_n) on Z.
EstimateCI estimate_box_reach(const StarLikeGraph& g, std::int64_t n, const RCParams& p, const Schedule& s,
                              int chains = 1);

struct DecayFit {
  double alpha_hat = 0.0;
  double alpha_se = 0.0;
  double intercept = 0.0;
  std::int64_t n_lo = 0;
  std::int64_t n_hi = 0;
  double chi2_per_dof = 0.0;  // weighted residuals; far above 1 flags a non-exponential profile
  int points = 0;
};

// Weighted least squares of log(mean) against n with weights mean^2 / se^2.
// InvalidArgument with fewer than 4 points, NonPositiveEstimate for a zero
// or negative mean. An exact estimate (se = 0) gets the binomial floor
// 1 / n_samples.
DecayFit fit_decay(const std::vector<std::pair<std::int64_t, EstimateCI>>& points);

// Dual half-circuit on the half-plane: (0, 2n+1) <-> (0, -2n-1) off T_n in the
// dual of wired strip samples of width a_max. Dual site a is the edge
// (a, a+1). KindMismatch off Z.
EstimateCI off_box_connection(const StarLikeGraph& g, std::int64_t n, std::int64_t a_max, const RCParams& p,
                              const Schedule& s, int chains = 1);

// Dual 0 <-> {a = a_max} inside the wedge, from wired wedge samples.
EstimateCI wedge_connection(const StarLikeGraph& g, std::int64_t a_max, const RCParams& p, const Schedule& s,
                            int chains = 1);

struct ScanPoint {
  double ratio = 0.0;
  std::int64_t n = 0;
  EstimateCI estimate;
};

struct Crossing {
  std::int64_t n_small = 0;
  std::int64_t n_large = 0;
  double lo = 0.0;  // bracketing grid interval
  double hi = 0.0;
  double rho = 0.0;
};

struct ScanResult {
  double rho_hat = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::vector<ScanPoint> table;
  std::vector<Crossing> crossings;  // one per successive size pair
};

// Spanning probability of free Lambda_n at lambda = ratio * delta for every
// (ratio, n); rho_hat is the crossing of the two largest sizes, located by
// linear interpolation. The schedule's seed is mixed with the point index.
// InvalidArgument for fewer than 3 sizes or 5 ratios, NoBracketing when the
// largest pair does not cross on the grid.
ScanResult scan_critical(const StarLikeGraph& g, double q, const std::vector<double>& ratios,
                         const std::vector<std::int64_t>& sizes, const Schedule& s, double delta = 1.0,
                         int chains = 1);

// Locates the crossing from a finished table (used by scan_critical).
ScanResult locate_crossing(std::vector<ScanPoint> table);

struct AssociationPair {
  std::string a, b;
  double p_a = 0.0, p_b = 0.0, p_ab = 0.0;
  double covariance = 0.0;  // p_ab - p_a p_b
  double se = 0.0;          // delta-method standard error of the covariance
  bool pass = false;        // covariance >= -3 se
};

// Checks P(A and B) >= P(A) P(B) - 3 se for every pair of the given
// increasing indicators on one run.
std::vector<AssociationPair> positive_association(const Region& r, const RCParams& p, const Schedule& s, int chains,
                                                  const std::vector<std::string>& names,
                                                  const std::vector<Observable>& events);

}  // namespace fkstar
