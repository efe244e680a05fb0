#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fkstar/error.hpp"
#include "fkstar/sampler.hpp"

namespace fkstar {

struct EstimateCI {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_samples)
  std::int64_t n_samples = 0;
  std::string observable;
  RCParams params;
};

// Running sums; merging two tallies gives exactly the pooled tally.
struct Tally {
  std::int64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Tally& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const {
    if (n < 2) return 0.0;
    double m = mean();
    double v = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return v > 0.0 ? v : 0.0;
  }
  double std_error() const { return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }

  // InvalidArgument with fewer than two samples.
  EstimateCI estimate(std::string observable, const RCParams& params) const {
    if (n < 2) throw Error(ErrorCode::kInvalidArgument, "an estimate needs at least two samples");
    return {mean(), std_error(), n, std::move(observable), params};
  }
};

// One tally per observable of a fixed family.
struct TallySet {
  std::vector<Tally> tallies;

  explicit TallySet(std::size_t n = 0) : tallies(n) {}
  Tally& operator[](std::size_t i) { return tallies[i]; }
  const Tally& operator[](std::size_t i) const { return tallies[i]; }
  std::size_t size() const { return tallies.size(); }
  void merge(const TallySet& o) {
    for (std::size_t i = 0; i < tallies.size(); ++i) tallies[i].merge(o.tallies[i]);
  }
};

// z-score of a difference of two independent estimates; 0 when both are exact.
inline double z_score(double a, double se_a, double b, double se_b) {
  double s = std::sqrt(se_a * se_a + se_b * se_b);
  if (s == 0.0) return a == b ? 0.0 : (a > b ? INFINITY : -INFINITY);
  return (a - b) / s;
}

}  // namespace fkstar
