// Acceptance run: one PASS/FAIL line per criterion A1..A7.
//   fkstar_acceptance            all criteria
//   fkstar_acceptance A3 A5      a subset
//   --report FILE                also write the verdict lines to FILE
// Exit status 1 if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "fkstar/cluster.hpp"
#include "fkstar/duality.hpp"
#include "fkstar/estimate.hpp"
#include "fkstar/graph.hpp"
#include "fkstar/observables.hpp"
#include "fkstar/oracle_ed.hpp"
#include "fkstar/region.hpp"
#include "fkstar/sampler.hpp"
#include "fkstar/stats.hpp"
#include "oracles.hpp"
#include "random_config.hpp"

using namespace fkstar;

namespace {

// Pinned tolerances.
constexpr int kA1Configs = 10000;
constexpr double kA2Alpha = 0.01;
constexpr int kA2Reps = 20;
constexpr double kA3Z = 3.0;
constexpr double kA3PassFraction = 0.95;
constexpr double kA4Sigmas = 3.0;
constexpr double kA4ZeroSigmas = 2.0;
constexpr double kA5Z = 3.0;
constexpr double kA6Q2Lo = 1.8, kA6Q2Hi = 2.2;
constexpr double kA6Q1Lo = 0.9, kA6Q1Hi = 1.1;
constexpr std::int64_t kA6Samples = 20000;
constexpr double kA7Sigmas = 3.0;
constexpr double kA7PassFraction = 0.95;

const VertexAddress O{kCoreRay, 0};

struct Verdict {
  bool pass = false;
  std::string detail;
};

FiniteGraph data_graph(const char* name) {
  return build_finite_graph(load_graph_spec(std::string(FKSTAR_DATA_DIR) + "/" + name));
}

// A1: cluster counts against the explicit segment-graph BFS.
Verdict a1() {
  Rng rng(20231, 0);
  std::vector<StarLikeGraph> graphs{oracle::star(2), oracle::star(3), oracle::star(4)};
  int mismatches = 0, total = 0;
  for (int i = 0; i < kA1Configs; ++i) {
    const auto& g = graphs[rng.below(graphs.size())];
    std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(6));
    Boundary bc = i % 2 ? Boundary::kWired : Boundary::kFree;
    auto r = lambda_region(g, n, bc);
    auto c = random_configuration(g, r, rng, 4);
    if (count_clusters(c, r).first != oracle::bfs_cluster_count(c, r)) ++mismatches;
    ++total;
  }
  return {mismatches == 0, fmt::format("{} configurations, {} mismatches", total, mismatches)};
}

// A2: birth-death MH at q = 1 against independent Poisson draws.
Verdict a2() {
  auto g = oracle::star(3);
  auto r = lambda_region(g, 1, Boundary::kFree);
  RCParams p{1.0, 1.0, 1.0, Boundary::kFree};
  int origin_line = -1;
  for (int i = 0; i < r.vertex_line_count(); ++i)
    if (r.vertex_lines()[i].vertex == O) origin_line = i;

  struct Draws {
    std::vector<double> counts;  // histogram of the total event count
    std::vector<double> first;   // first death on the origin line, from the window bottom
  };
  auto collect = [&](const Schedule& s) {
    Draws d;
    run_chain(r, p, s, [&](const SampleView& v) {
      std::size_t m = v.events.bridge_count() + v.events.death_count();
      if (d.counts.size() <= m) d.counts.resize(m + 1, 0.0);
      d.counts[m] += 1.0;
      const auto& line = v.events.deaths[origin_line];
      if (!line.empty()) d.first.push_back(line.front() - r.vertex_lines()[origin_line].window.lo);
    });
    return d;
  };

  std::vector<double> p_chi2, p_ks;
  for (int rep = 0; rep < kA2Reps; ++rep) {
    Schedule mh = default_schedule(r, MoveKind::kBirthDeath, 2000, 500 + rep);
    mh.thinning *= 10;  // near-independent draws for the tests below
    Schedule direct{0, 2000, 1, static_cast<std::uint64_t>(900 + rep), MoveKind::kDirect};
    auto a = collect(mh);
    auto b = collect(direct);
    std::size_t len = std::max(a.counts.size(), b.counts.size());
    a.counts.resize(len, 0.0);
    b.counts.resize(len, 0.0);
    p_chi2.push_back(chi2_homogeneity(a.counts, b.counts).p_value);
    p_ks.push_back(ks_two_sample(a.first, b.first).p_value);
  }
  double pc = fisher_combine(p_chi2).p_value;
  double pk = fisher_combine(p_ks).p_value;
  return {pc > kA2Alpha && pk > kA2Alpha,
          fmt::format("Fisher p: counts chi2 {:.4f}, first-death KS {:.4f} over {} reps", pc, pk, kA2Reps)};
}

// A3: dualized samples vs direct samples at the dual parameters.
Verdict a3() {
  auto z = oracle::line();
  Schedule primal{1000, 20000, 2, 31, MoveKind::kCluster};
  Schedule direct{1000, 20000, 2, 32, MoveKind::kCluster};
  bool pass = true;
  std::string detail;
  for (RCParams p : {RCParams{1.0, 1.0, 2.0, Boundary::kWired}, RCParams{2.0, 1.0, 2.0, Boundary::kFree}}) {
    auto rep = duality_check(z, p, 6, primal, direct);
    rep.z_limit = kA3Z;
    double f = rep.pass_fraction();
    double zmax = 0.0;
    for (const auto& row : rep.rows) zmax = std::max(zmax, std::abs(row.z));
    pass = pass && f >= kA3PassFraction;
    detail += fmt::format("(lambda={},delta={},{}) pass {:.2f} max|z| {:.2f}; ", p.lambda, p.delta, to_string(p.bc), f,
                          zmax);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// A4: exponential decay of the box reach on Z.
Verdict a4() {
  auto z = oracle::line();
  // rare events at the larger sizes need more samples
  std::vector<std::pair<std::int64_t, std::int64_t>> sizes{{4, 20000}, {8, 50000}, {12, 200000}, {16, 600000}};
  std::vector<std::pair<std::int64_t, EstimateCI>> pts;
  for (auto [n, samples] : sizes) {
    Schedule s{1000, samples, 1, static_cast<std::uint64_t>(40 + n), MoveKind::kCluster};
    pts.push_back({n, estimate_box_reach(z, n, {1.0, 1.0, 2.0, Boundary::kWired}, s)});
  }
  auto f = fit_decay(pts);
  bool ok1 = f.alpha_hat > kA4Sigmas * f.alpha_se;

  const double delta = 0.5;
  std::vector<std::pair<std::int64_t, EstimateCI>> zero;
  for (std::int64_t n : {10, 12, 14, 16}) {
    Schedule s{0, 200000, 1, static_cast<std::uint64_t>(60 + n), MoveKind::kDirect};
    zero.push_back({n, estimate_box_reach(z, n, {0.0, delta, 1.0, Boundary::kWired}, s)});
  }
  auto f0 = fit_decay(zero);
  bool ok2 = std::abs(f0.alpha_hat - delta) <= kA4ZeroSigmas * f0.alpha_se;
  return {ok1 && ok2, fmt::format("q=2 alpha {:.4f} +- {:.4f} ({:.1f} se); lambda=0 alpha {:.4f} +- {:.4f} vs {}",
                                  f.alpha_hat, f.alpha_se, f.alpha_hat / f.alpha_se, f0.alpha_hat, f0.alpha_se, delta)};
}

// A5: FK connection at periodic height beta vs the exact finite-beta correlation.
Verdict a5() {
  const double beta = 4.0, delta = 1.0;
  bool pass = true;
  double zmax = 0.0;
  int checks = 0;
  std::uint64_t seed = 70;
  for (const char* file : {"two_vertex.json", "star3_finite.json"}) {
    auto g = data_graph(file);
    auto r = finite_region(g, beta, Boundary::kPeriodic);
    int origin = static_cast<int>(g.origin().index);
    for (double ratio : {1.0, 2.0, 3.0}) {
      RCParams p{ratio * delta, delta, 2.0, Boundary::kPeriodic};
      std::vector<std::string> names;
      std::vector<Observable> events;
      std::vector<double> exact;
      for (int y = 0; y < g.vertex_count(); ++y) {
        if (y == origin) continue;
        names.push_back(std::to_string(y));
        events.push_back(connection_indicator(r, {{kCoreRay, origin}, 0.0}, {{kCoreRay, y}, 0.0}));
        exact.push_back(finite_beta_correlation(g, p.lambda, p.delta, beta, origin, y));
      }
      auto est = estimate_observables(r, p, {1000, 50000, 10, seed++, MoveKind::kCluster}, 1, names, events);
      for (std::size_t i = 0; i < est.size(); ++i) {
        double zi = z_score(est[i].mean, est[i].std_error, exact[i], 0.0);
        zmax = std::max(zmax, std::abs(zi));
        pass = pass && std::abs(zi) <= kA5Z;
        ++checks;
      }
    }
  }
  return {pass, fmt::format("{} correlations, max|z| {:.2f}", checks, zmax)};
}

// A6: crossing of the spanning curves.
Verdict a6() {
  std::vector<double> q2, q1;
  for (int i = 0; i <= 6; ++i) q2.push_back(1.4 + 0.2 * i);
  for (int i = 0; i <= 4; ++i) q1.push_back(0.8 + 0.1 * i);
  const std::vector<std::int64_t> sizes{8, 16, 32};
  Schedule sw{1000, kA6Samples, 1, 7, MoveKind::kCluster};
  Schedule direct{0, kA6Samples, 1, 7, MoveKind::kDirect};

  struct Case {
    const char* name;
    StarLikeGraph g;
    double q;
    const std::vector<double>& ratios;
    Schedule s;
    double lo, hi;
  };
  std::vector<Case> cases{{"Z q=2", oracle::line(), 2.0, q2, sw, kA6Q2Lo, kA6Q2Hi},
                          {"star3 q=2", oracle::star(3), 2.0, q2, sw, kA6Q2Lo, kA6Q2Hi},
                          {"Z q=1", oracle::line(), 1.0, q1, direct, kA6Q1Lo, kA6Q1Hi}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    try {
      auto res = scan_critical(c.g, c.q, c.ratios, sizes, c.s);
      bool ok = res.rho_hat >= c.lo && res.rho_hat <= c.hi;
      pass = pass && ok;
      detail += fmt::format("{} rho_hat {:.3f}; ", c.name, res.rho_hat);
    } catch (const Error& e) {
      pass = false;
      detail += fmt::format("{} {}; ", c.name, e.what());
    }
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// A7: monotonicity in n, wired over free, positive association.
Verdict a7() {
  auto g = oracle::star(3);
  Schedule s{1000, 20000, 2, 80, MoveKind::kCluster};
  const double lambda = 1.5;
  int order_checks = 0, order_fail = 0;
  std::vector<EstimateCI> prev_wired;
  EstimateCI last_wired;
  for (std::int64_t n = 1; n <= 5; ++n) {
    s.seed = 80 + 2 * n;
    auto w = estimate_theta(g, n, {lambda, 1.0, 2.0, Boundary::kWired}, s);
    s.seed = 81 + 2 * n;
    auto f = estimate_theta(g, n, {lambda, 1.0, 2.0, Boundary::kFree}, s);
    ++order_checks;
    if (w.mean - f.mean < -kA7Sigmas * std::hypot(w.std_error, f.std_error)) ++order_fail;
    if (n > 1) {
      ++order_checks;
      if (w.mean - last_wired.mean > kA7Sigmas * std::hypot(w.std_error, last_wired.std_error)) ++order_fail;
    }
    last_wired = w;
  }

  int pairs = 0, pairs_pass = 0;
  std::uint64_t seed = 90;
  for (Boundary bc : {Boundary::kFree, Boundary::kWired}) {
    for (double lam : {1.0, 2.0}) {
      auto r = lambda_region(g, 2, bc);
      std::vector<std::string> names{"theta"};
      std::vector<Observable> events{boundary_indicator(r, {O, 0.0})};
      for (int ray = 0; ray < 3; ++ray) {
        names.push_back("arm" + std::to_string(ray));
        events.push_back(connection_indicator(r, {O, 0.0}, {{ray, 2}, 0.5}));
      }
      names.push_back("leaves01");
      events.push_back(connection_indicator(r, {{0, 1}, -1.0}, {{1, 1}, 1.0}));
      auto res = positive_association(r, {lam, 1.0, 2.0, bc}, {1000, 10000, 2, seed++, MoveKind::kCluster}, 1,
                                      names, events);
      for (const auto& pr : res) {
        ++pairs;
        pairs_pass += pr.pass;
      }
    }
  }
  double frac = static_cast<double>(pairs_pass) / pairs;
  return {order_fail == 0 && frac >= kA7PassFraction,
          fmt::format("orderings {}/{} hold; association {}/{} pairs pass", order_checks - order_fail, order_checks,
                      pairs_pass, pairs)};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::function<Verdict()>>> all{{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},
                                                                    {"A5", a5}, {"A6", a6}, {"A7", a7}};
  std::set<std::string> pick;
  std::string report_path;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--report" && i + 1 < argc)
      report_path = argv[++i];
    else
      pick.insert(a);
  }
  std::FILE* report = report_path.empty() ? nullptr : std::fopen(report_path.c_str(), "w");
  bool ok = true;
  for (const auto& [name, run] : all) {
    if (!pick.empty() && !pick.count(name)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::FILE* f : {stdout, report}) {
      if (!f) continue;
      std::fprintf(f, "%s %s  %s  [%.1fs]\n", name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
      std::fflush(f);
    }
    ok = ok && v.pass;
  }
  if (report) std::fclose(report);
  return ok ? 0 : 1;
}
