#include "fkstar/observables.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "fkstar/duality.hpp"

namespace fkstar {

namespace {

struct LinePoint {
  int line;
  double t;
};

LinePoint locate(const Region& r, const SpacePoint& p) {
  auto line = r.find_vertex_line(p.vertex);
  if (!line) throw Error(ErrorCode::kPointOutsideRegion, "point on a vertex outside the region");
  const Window& w = r.vertex_lines()[*line].window;
  if (!w.contains(p.time)) throw Error(ErrorCode::kPointOutsideRegion, fmt::format("time {} outside the window", p.time));
  return {*line, p.time};
}

// Collects 0/1 rows so joint moments of any order are available afterwards.
struct Rows {
  std::vector<std::vector<char>> rows;
  void merge(const Rows& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step so neighbouring points get unrelated streams
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Observable connection_indicator(const Region& r, const SpacePoint& a, const SpacePoint& b) {
  LinePoint pa = locate(r, a), pb = locate(r, b);
  return [pa, pb](const SampleView& v) {
    auto x = v.labeling.try_segment_at(pa.line, pa.t);
    auto y = v.labeling.try_segment_at(pb.line, pb.t);
    return x && y && v.labeling.connected(*x, *y) ? 1.0 : 0.0;
  };
}

Observable boundary_indicator(const Region& r, const SpacePoint& a) {
  LinePoint pa = locate(r, a);
  return [pa](const SampleView& v) {
    auto x = v.labeling.try_segment_at(pa.line, pa.t);
    return x && v.labeling.reaches_boundary(*x) ? 1.0 : 0.0;
  };
}

Observable spanning_indicator(const Region& r) {
  std::vector<int> sides;
  for (int i = 0; i < r.vertex_line_count(); ++i) {
    if (r.vertex_lines()[i].side) sides.push_back(i);
  }
  if (sides.size() < 2) throw Error(ErrorCode::kInvalidArgument, "spanning needs at least two side lines");
  return [sides](const SampleView& v) {
    const auto& lab = v.labeling;
    auto roots = [&](int line) {
      std::vector<int> out;
      int first = lab.first_segment(line);
      for (int k = 0; k < lab.line_segment_count(line); ++k) out.push_back(lab.find(first + k));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };
    std::vector<int> common = roots(sides[0]);
    for (std::size_t i = 1; i < sides.size() && !common.empty(); ++i) {
      std::vector<int> next = roots(sides[i]), kept;
      std::set_intersection(common.begin(), common.end(), next.begin(), next.end(), std::back_inserter(kept));
      common = std::move(kept);
    }
    return common.empty() ? 0.0 : 1.0;
  };
}

std::vector<EstimateCI> estimate_observables(const Region& r, const RCParams& p, const Schedule& s, int chains,
                                             const std::vector<std::string>& names,
                                             const std::vector<Observable>& observables) {
  if (names.size() != observables.size()) throw Error(ErrorCode::kInvalidArgument, "one name per observable");
  TallySet t = run_chains(r, p, s, chains, TallySet(observables.size()), [&](TallySet& acc, const SampleView& v) {
    for (std::size_t i = 0; i < observables.size(); ++i) acc[i].add(observables[i](v));
  });
  std::vector<EstimateCI> out;
  for (std::size_t i = 0; i < observables.size(); ++i) out.push_back(t[i].estimate(names[i], p));
  return out;
}

EstimateCI estimate_connection(const Region& r, const RCParams& p, const Schedule& s, const SpacePoint& a,
                               const SpacePoint& b, int chains) {
  return estimate_observables(r, p, s, chains, {"connection"}, {connection_indicator(r, a, b)})[0];
}

EstimateCI estimate_theta(const StarLikeGraph& g, std::int64_t n, const RCParams& p, const Schedule& s, int chains) {
  Region r = lambda_region(g, n, p.bc);
  return estimate_observables(r, p, s, chains, {"theta"}, {boundary_indicator(r, {g.origin(), 0.0})})[0];
}

EstimateCI estimate_box_reach(const StarLikeGraph& g, std::int64_t n, const RCParams& p, const Schedule& s,
                              int chains) {
  Region r = box_region(g, n, 0, 0.0, p.bc);
  return estimate_observables(r, p, s, chains, {"box_reach"}, {boundary_indicator(r, {g.origin(), 0.0})})[0];
}

DecayFit fit_decay(const std::vector<std::pair<std::int64_t, EstimateCI>>& points) {
  if (points.size() < 4) throw Error(ErrorCode::kInvalidArgument, "a decay fit needs at least 4 sizes");
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<std::array<double, 3>> data;  // x, y, w
  for (const auto& [n, e] : points) {
    if (!(e.mean > 0.0)) {
      throw Error(ErrorCode::kNonPositiveEstimate, fmt::format("estimate at n = {} is {}", n, e.mean));
    }
    double se = e.std_error > 0.0 ? e.std_error : 1.0 / static_cast<double>(std::max<std::int64_t>(e.n_samples, 1));
    double w = (e.mean / se) * (e.mean / se);  // 1 / var(log mean)
    double x = static_cast<double>(n), y = std::log(e.mean);
    data.push_back({x, y, w});
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw Error(ErrorCode::kInvalidArgument, "a decay fit needs at least two distinct sizes");
  double slope = (sw * sxy - sx * sy) / det;
  double icpt = (sy - slope * sx) / sw;
  DecayFit f;
  f.alpha_hat = -slope;
  f.alpha_se = std::sqrt(sw / det);
  f.intercept = icpt;
  f.points = static_cast<int>(points.size());
  f.n_lo = points.front().first;
  f.n_hi = points.front().first;
  double chi2 = 0.0;
  for (const auto& [x, y, w] : data) {
    double res = y - (icpt + slope * x);
    chi2 += w * res * res;
  }
  for (const auto& pt : points) {
    f.n_lo = std::min(f.n_lo, pt.first);
    f.n_hi = std::max(f.n_hi, pt.first);
  }
  f.chi2_per_dof = chi2 / static_cast<double>(points.size() - 2);
  return f;
}

EstimateCI off_box_connection(const StarLikeGraph& g, std::int64_t n, std::int64_t a_max, const RCParams& p,
                              const Schedule& s, int chains) {
  if (!g.is_line()) throw Error(ErrorCode::kKindMismatch, "off-box connection lives on the half-plane of Z");
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "off-box connection needs n >= 1");
  if (a_max <= 2 * n) throw Error(ErrorCode::kInvalidArgument, "the strip must extend past T_n (a_max > 2n)");
  RCParams pw = p;
  pw.bc = Boundary::kWired;
  Region r = strip_region(g, n, a_max, Boundary::kWired);
  // dual sites inside T_n = [0, 2n] x [-n, n] are removed
  std::vector<std::optional<Window>> holes(r.edge_line_count());
  int source = -1;
  for (int j = 0; j < r.edge_line_count(); ++j) {
    std::int64_t a = line_edge_coordinate(r.edge_lines()[j].edge);
    if (a == 0) source = j;
    if (a >= 0 && a < 2 * n) holes[j] = Window{-static_cast<double>(n), static_cast<double>(n)};
  }
  double h = static_cast<double>(2 * n + 1);
  TallySet t = run_chains(r, pw, s, chains, TallySet(1), [&](TallySet& acc, const SampleView& v) {
    ClusterLabeling lab = label_dual(v.region, v.events, &holes);
    auto x = lab.try_segment_at(source, h);
    auto y = lab.try_segment_at(source, -h);
    acc[0].add(x && y && lab.connected(*x, *y) ? 1.0 : 0.0);
  });
  return t[0].estimate(fmt::format("off_box:{}", n), pw);
}

EstimateCI wedge_connection(const StarLikeGraph& g, std::int64_t a_max, const RCParams& p, const Schedule& s,
                            int chains) {
  if (!g.is_line()) throw Error(ErrorCode::kKindMismatch, "the wedge lives on the half-plane of Z");
  RCParams pw = p;
  pw.bc = Boundary::kWired;
  Region r = wedge_region(g, a_max, Boundary::kWired);
  int source = -1, target = -1;
  for (int j = 0; j < r.edge_line_count(); ++j) {
    std::int64_t a = line_edge_coordinate(r.edge_lines()[j].edge);
    if (a == 0) source = j;
    if (a == a_max) target = j;
  }
  if (source < 0 || target < 0) throw Error(ErrorCode::kInvalidArgument, "wedge too small for a crossing");
  TallySet t = run_chains(r, pw, s, chains, TallySet(1), [&](TallySet& acc, const SampleView& v) {
    ClusterLabeling lab = label_dual(v.region, v.events);
    auto x = lab.try_segment_at(source, 0.0);
    bool hit = false;
    if (x) {
      int first = lab.first_segment(target);
      for (int k = 0; k < lab.line_segment_count(target) && !hit; ++k) hit = lab.connected(*x, first + k);
    }
    acc[0].add(hit ? 1.0 : 0.0);
  });
  return t[0].estimate(fmt::format("wedge:{}", a_max), pw);
}

ScanResult locate_crossing(std::vector<ScanPoint> table) {
  std::set<double> ratio_set;
  std::set<std::int64_t> size_set;
  for (const auto& pt : table) {
    ratio_set.insert(pt.ratio);
    size_set.insert(pt.n);
  }
  std::vector<double> ratios(ratio_set.begin(), ratio_set.end());
  std::vector<std::int64_t> sizes(size_set.begin(), size_set.end());
  auto value = [&](double ratio, std::int64_t n) {
    for (const auto& pt : table) {
      if (pt.ratio == ratio && pt.n == n) return pt.estimate.mean;
    }
    throw Error(ErrorCode::kInvalidArgument, fmt::format("scan table lacks ratio {} at n = {}", ratio, n));
  };
  ScanResult out;
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    Crossing c;
    c.n_small = sizes[k];
    c.n_large = sizes[k + 1];
    bool found = false;
    // below criticality the larger box spans less often, above it more often
    for (std::size_t i = 0; i + 1 < ratios.size() && !found; ++i) {
      double d0 = value(ratios[i], c.n_large) - value(ratios[i], c.n_small);
      double d1 = value(ratios[i + 1], c.n_large) - value(ratios[i + 1], c.n_small);
      if (d0 <= 0.0 && d1 > 0.0) {
        c.lo = ratios[i];
        c.hi = ratios[i + 1];
        c.rho = d1 == d0 ? c.lo : c.lo + (c.hi - c.lo) * (-d0) / (d1 - d0);
        found = true;
      }
    }
    if (found) out.crossings.push_back(c);
    if (k + 2 == sizes.size()) {
      if (!found) throw Error(ErrorCode::kNoBracketing, fmt::format("no crossing of n = {} and n = {} on the grid",
                                                                    c.n_small, c.n_large));
      out.rho_hat = c.rho;
      out.bracket_lo = c.lo;
      out.bracket_hi = c.hi;
    }
  }
  out.table = std::move(table);
  return out;
}

ScanResult scan_critical(const StarLikeGraph& g, double q, const std::vector<double>& ratios,
                         const std::vector<std::int64_t>& sizes, const Schedule& s, double delta, int chains) {
  if (sizes.size() < 3) throw Error(ErrorCode::kInvalidArgument, "scan needs at least 3 sizes");
  if (ratios.size() < 5) throw Error(ErrorCode::kInvalidArgument, "scan needs at least 5 ratios");
  std::vector<ScanPoint> table;
  std::uint64_t index = 0;
  for (std::int64_t n : sizes) {
    Region r = lambda_region(g, n, Boundary::kFree);
    Observable span = spanning_indicator(r);
    for (double ratio : ratios) {
      RCParams p{ratio * delta, delta, q, Boundary::kFree};
      Schedule si = s;
      si.seed = mix_seed(s.seed, index++);
      auto e = estimate_observables(r, p, si, chains, {fmt::format("span:{}", n)}, {span})[0];
      table.push_back({ratio, n, e});
    }
  }
  return locate_crossing(std::move(table));
}

std::vector<AssociationPair> positive_association(const Region& r, const RCParams& p, const Schedule& s, int chains,
                                                  const std::vector<std::string>& names,
                                                  const std::vector<Observable>& events) {
  if (names.size() != events.size()) throw Error(ErrorCode::kInvalidArgument, "one name per event");
  Rows rows = run_chains(r, p, s, chains, Rows{}, [&](Rows& acc, const SampleView& v) {
    std::vector<char> row(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) row[i] = events[i](v) > 0.5;
    acc.rows.push_back(std::move(row));
  });
  double n = static_cast<double>(rows.rows.size());
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "association needs at least two samples");
  std::vector<AssociationPair> out;
  for (std::size_t a = 0; a < events.size(); ++a) {
    for (std::size_t b = a + 1; b < events.size(); ++b) {
      AssociationPair pr;
      pr.a = names[a];
      pr.b = names[b];
      for (const auto& row : rows.rows) {
        pr.p_a += row[a];
        pr.p_b += row[b];
        pr.p_ab += row[a] && row[b];
      }
      pr.p_a /= n;
      pr.p_b /= n;
      pr.p_ab /= n;
      pr.covariance = pr.p_ab - pr.p_a * pr.p_b;
      // influence function of p_ab - p_a p_b
      Tally psi;
      for (const auto& row : rows.rows) {
        double xa = row[a], xb = row[b];
        psi.add(xa * xb - pr.p_b * xa - pr.p_a * xb);
      }
      pr.se = psi.std_error();
      pr.pass = pr.covariance >= -3.0 * pr.se;
      out.push_back(pr);
    }
  }
  return out;
}

}  // namespace fkstar
