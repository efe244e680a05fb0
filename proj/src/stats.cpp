#include "fkstar/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "fkstar/error.hpp"

namespace fkstar {

namespace {

double chi2_sf(double x, double dof) {
  if (dof <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), std::max(x, 0.0)));
}

}  // namespace

double kolmogorov_sf(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.2) return 1.0;  // series converges slowly; the value is 1 to double precision anyway
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

TestResult chi2_homogeneity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorCode::kInvalidArgument, "histograms need the same bins");
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a[i];
    nb += b[i];
  }
  if (na <= 0.0 || nb <= 0.0) throw Error(ErrorCode::kInvalidArgument, "empty histogram");
  double n = na + nb;
  // pool bins until the expected counts are large enough
  std::vector<std::pair<double, double>> bins;
  double ca = 0.0, cb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
    double tot = ca + cb;
    if (tot * na / n >= 5.0 && tot * nb / n >= 5.0) {
      bins.push_back({ca, cb});
      ca = cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (bins.empty()) {
      bins.push_back({ca, cb});
    } else {
      bins.back().first += ca;
      bins.back().second += cb;
    }
  }
  TestResult out;
  for (auto [x, y] : bins) {
    double tot = x + y;
    double ea = tot * na / n, eb = tot * nb / n;
    out.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  out.dof = static_cast<double>(bins.size()) - 1.0;
  out.p_value = chi2_sf(out.statistic, out.dof);
  return out;
}

TestResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw Error(ErrorCode::kInvalidArgument, "KS needs two non-empty samples");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  double ne = std::sqrt(nx * ny / (nx + ny));
  TestResult out;
  out.statistic = d;
  out.p_value = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
  return out;
}

TestResult fisher_combine(std::span<const double> p_values) {
  if (p_values.empty()) throw Error(ErrorCode::kInvalidArgument, "no p-values to combine");
  TestResult out;
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "p-value outside [0, 1]");
    out.statistic += -2.0 * std::log(std::max(p, 1e-300));
  }
  out.dof = 2.0 * static_cast<double>(p_values.size());
  out.p_value = chi2_sf(out.statistic, out.dof);
  return out;
}

}  // namespace fkstar
