#include <cmath>
#include <memory>

#include "doctest.h"
#include "fkstar/estimate.hpp"
#include "fkstar/sampler.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace fkstar;

namespace {

int recount(const Region& r, const LineEvents& ev) { return label_clusters(r, ev).components(); }

void insert_sorted(std::vector<double>& v, double t) { v.insert(std::upper_bound(v.begin(), v.end(), t), t); }

// P(no death on a single line of length L) at lambda = 0. Free: deaths are
// Poisson(q delta). Wired: the first death leaves k = 1, every further one adds
// a cluster, so P(m) is proportional to (delta L)^m q^(m-1) / m! for m >= 1.
double p_no_death(double q, double delta, double L, Boundary bc) {
  if (bc == Boundary::kFree) return std::exp(-q * delta * L);
  return q / (q - 1.0 + std::exp(q * delta * L));
}

}  // namespace

TEST_CASE("parameter and schedule validation") {
  auto z = oracle::line();
  auto r = lambda_region(z, 2, Boundary::kFree);
  CHECK(code_of([] { RCParams{-1.0, 1.0, 2.0}.validate(); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { RCParams{1.0, 0.0, 2.0}.validate(); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { RCParams{1.0, 1.0, 0.5}.validate(); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { RCParams{NAN, 1.0, 2.0}.validate(); }) == ErrorCode::kInvalidArgument);

  Schedule s;
  s.move = MoveKind::kCluster;
  CHECK(code_of([&] { check_run(r, {1.0, 1.0, 3.0, Boundary::kFree}, s); }) == ErrorCode::kUnsupportedQ);
  s.move = MoveKind::kDirect;
  CHECK(code_of([&] { check_run(r, {1.0, 1.0, 2.0, Boundary::kFree}, s); }) == ErrorCode::kUnsupportedQ);
  s.move = MoveKind::kBirthDeath;
  CHECK(code_of([&] { check_run(r, {1.0, 1.0, 2.0, Boundary::kWired}, s); }) == ErrorCode::kInvalidArgument);
  s.thinning = 0;
  CHECK(code_of([&] { check_run(r, {1.0, 1.0, 2.0, Boundary::kFree}, s); }) == ErrorCode::kInvalidArgument);

  ChainState st(std::make_shared<Region>(r));
  Rng rng(1, 0);
  CHECK(code_of([&] { sw_sweep(st, {1.0, 1.0, 3.0, Boundary::kFree}, rng); }) == ErrorCode::kUnsupportedQ);

  CHECK(parse_move("sw") == MoveKind::kCluster);
  CHECK(parse_move("birth-death") == MoveKind::kBirthDeath);
  CHECK(code_of([] { parse_move("gibbs"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("Poisson sampling has the right means") {
  auto g = oracle::star(3);
  auto r = lambda_region(g, 2, Boundary::kFree);
  Rng rng(5, 0);
  Tally b, d;
  for (int i = 0; i < 4000; ++i) {
    auto ev = sample_poisson_lines(r, 0.7, 1.3, rng);
    b.add(static_cast<double>(ev.bridge_count()));
    d.add(static_cast<double>(ev.death_count()));
  }
  CHECK(std::abs(b.mean() - 0.7 * r.edge_length()) < 4.0 * b.std_error());
  CHECK(std::abs(d.mean() - 1.3 * r.vertex_length()) < 4.0 * d.std_error());
}

TEST_CASE("delta_k_bfs agrees with recounting") {
  Rng rng(17, 0);
  for (int k : {2, 3}) {
    auto g = oracle::star(k);
    for (Boundary bc : {Boundary::kFree, Boundary::kWired, Boundary::kPeriodic}) {
      auto r = lambda_region(g, 2, bc);
      for (int rep = 0; rep < 150; ++rep) {
        auto ev = to_line_events(restrict(random_configuration(g, r, rng, 3), r), r);
        int k0 = recount(r, ev);
        // insertions at fresh times
        int j = static_cast<int>(rng.below(r.edge_line_count()));
        const auto& ew = r.edge_lines()[j].window;
        double t = ew.lo + rng.uniform_open() * ew.length();
        int dk = delta_k_bfs(r, ev, kInsertBridge, j, t);
        auto ev2 = ev;
        insert_sorted(ev2.bridges[j], t);
        CHECK(dk == recount(r, ev2) - k0);

        int i = static_cast<int>(rng.below(r.vertex_line_count()));
        const auto& vw = r.vertex_lines()[i].window;
        t = vw.lo + rng.uniform_open() * vw.length();
        dk = delta_k_bfs(r, ev, kInsertDeath, i, t);
        ev2 = ev;
        insert_sorted(ev2.deaths[i], t);
        CHECK(dk == recount(r, ev2) - k0);
        CHECK(recount(r, ev) == k0);  // the probe leaves ev as it was

        for (int jj = 0; jj < r.edge_line_count(); ++jj) {
          for (std::size_t p = 0; p < ev.bridges[jj].size(); ++p) {
            double tb = ev.bridges[jj][p];
            ev2 = ev;
            ev2.bridges[jj].erase(ev2.bridges[jj].begin() + p);
            CHECK(delta_k_bfs(r, ev, kDeleteBridge, jj, tb) == recount(r, ev2) - k0);
          }
        }
        for (int ii = 0; ii < r.vertex_line_count(); ++ii) {
          for (std::size_t p = 0; p < ev.deaths[ii].size(); ++p) {
            double td = ev.deaths[ii][p];
            ev2 = ev;
            ev2.deaths[ii].erase(ev2.deaths[ii].begin() + p);
            CHECK(delta_k_bfs(r, ev, kDeleteDeath, ii, td) == recount(r, ev2) - k0);
          }
        }
        CHECK(ev == to_line_events(to_configuration(ev, r), r));
      }
    }
  }
}

TEST_CASE("MH steps report the cluster change and the Hastings ratio") {
  auto g = oracle::star(3);
  for (Boundary bc : {Boundary::kFree, Boundary::kWired, Boundary::kPeriodic}) {
    auto r = std::make_shared<Region>(lambda_region(g, 2, bc));
    RCParams p{1.5, 0.8, 2.5, bc};
    ChainState s(r);
    Rng rng(3, 1);
    int k = s.k();
    for (int step = 0; step < 4000; ++step) {
      std::size_t nb = s.bridge_count(), nd = s.death_count();
      auto res = mcmc_step(s, p, rng);
      int k1 = s.k();
      CHECK(k1 == recount(*r, s.events()));
      if (res.accepted) {
        CHECK(k1 - k == res.dk);
        double expect = 0.0;
        switch (res.move) {
          case kInsertBridge: expect = p.lambda * r->edge_length() / (nb + 1.0); break;
          case kDeleteBridge: expect = nb / (p.lambda * r->edge_length()); break;
          case kInsertDeath: expect = p.delta * r->vertex_length() / (nd + 1.0); break;
          case kDeleteDeath: expect = nd / (p.delta * r->vertex_length()); break;
        }
        CHECK(res.ratio == doctest::Approx(expect * std::pow(p.q, res.dk)).epsilon(1e-12));
      } else {
        CHECK(k1 == k);
      }
      k = k1;
    }
    for (const auto& m : s.move_stats()) CHECK(m.proposed > 0);
  }
}

TEST_CASE("chains are deterministic given the seed") {
  auto g = oracle::star(3);
  auto r = lambda_region(g, 2, Boundary::kWired);
  RCParams p{1.0, 1.0, 2.0, Boundary::kWired};
  for (MoveKind m : {MoveKind::kBirthDeath, MoveKind::kCluster}) {
    Schedule s{50, 200, 3, 99, m};
    auto a = run_chain(r, p, s, [](const SampleView&) {});
    auto b = run_chain(r, p, s, [](const SampleView&) {});
    auto c = run_chain(r, p, s, [](const SampleView&) {}, 1);
    CHECK(a.k_trace == b.k_trace);
    CHECK(a.k_trace.size() == 200);
    CHECK(a.k_trace != c.k_trace);
  }
  // merged multi-chain tallies do not depend on thread timing
  Schedule s{100, 300, 1, 4, MoveKind::kCluster};
  auto count = [](Tally& t, const SampleView& v) { t.add(static_cast<double>(v.labeling.components())); };
  Tally x = run_chains(r, p, s, 4, Tally{}, count);
  Tally y = run_chains(r, p, s, 4, Tally{}, count);
  CHECK(x.n == 1200);
  CHECK(x.sum == y.sum);
  CHECK(x.sum_sq == y.sum_sq);
}

TEST_CASE("lambda = 0 single line: exact probability of no death") {
  auto g = oracle::star(3);
  const double h = 0.4, delta = 1.0;
  for (Boundary bc : {Boundary::kFree, Boundary::kWired}) {
    auto r = lambda_region(g, 0, bc, h);
    REQUIRE(r.vertex_line_count() == 1);
    for (double q : {1.0, 2.0, 3.0}) {
      RCParams p{0.0, delta, q, bc};
      double exact = p_no_death(q, delta, 2.0 * h, bc);
      auto est = [&](MoveKind m) {
        Schedule s{2000, 30000, 20, 11, m};
        return run_chains(r, p, s, 1, Tally{},
                          [](Tally& t, const SampleView& v) { t.add(v.events.death_count() == 0 ? 1.0 : 0.0); });
      };
      Tally mh = est(MoveKind::kBirthDeath);
      INFO("bc=" << to_string(bc) << " q=" << q << " exact=" << exact << " mh=" << mh.mean());
      CHECK(std::abs(mh.mean() - exact) < 4.0 * mh.std_error() + 1e-3);
      if (q == 2.0) {
        Tally sw = est(MoveKind::kCluster);
        INFO("sw=" << sw.mean());
        CHECK(std::abs(sw.mean() - exact) < 4.0 * sw.std_error() + 1e-3);
      }
    }
  }
}

TEST_CASE("cluster sweeps and MH agree at q = 2") {
  auto g = oracle::star(3);
  for (Boundary bc : {Boundary::kFree, Boundary::kWired, Boundary::kPeriodic}) {
    auto r = lambda_region(g, 2, bc);
    RCParams p{1.6, 1.0, 2.0, bc};
    auto obs = [](TallySet& t, const SampleView& v) {
      t[0].add(static_cast<double>(v.labeling.components()));
      t[1].add(static_cast<double>(v.events.bridge_count()));
      t[2].add(static_cast<double>(v.events.death_count()));
    };
    Schedule mh = default_schedule(r, MoveKind::kBirthDeath, 6000, 21);
    Schedule sw = default_schedule(r, MoveKind::kCluster, 6000, 22);
    auto a = run_chains(r, p, mh, 2, TallySet(3), obs);
    auto b = run_chains(r, p, sw, 2, TallySet(3), obs);
    for (int i = 0; i < 3; ++i) {
      INFO("bc=" << to_string(bc) << " obs=" << i << " mh=" << a[i].mean() << " sw=" << b[i].mean());
      // thinned chains are close to independent; allow some autocorrelation slack
      CHECK(std::abs(z_score(a[i].mean(), a[i].std_error(), b[i].mean(), b[i].std_error())) < 5.0);
    }
  }
}

TEST_CASE("direct sampling at q = 1 matches its Poisson law") {
  auto g = oracle::star(3);
  auto r = lambda_region(g, 1, Boundary::kFree);
  RCParams p{0.9, 1.1, 1.0, Boundary::kFree};
  Schedule s{0, 5000, 1, 8, MoveKind::kDirect};
  Tally t = run_chains(r, p, s, 1, Tally{},
                       [](Tally& acc, const SampleView& v) { acc.add(static_cast<double>(v.events.bridge_count())); });
  CHECK(std::abs(t.mean() - p.lambda * r.edge_length()) < 4.0 * t.std_error());
}
