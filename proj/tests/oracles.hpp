#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the cluster engine or the samplers.

#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "fkstar/config.hpp"
#include "fkstar/graph.hpp"
#include "fkstar/region.hpp"

namespace oracle {

inline fkstar::StarLikeGraph star(int k) {
  fkstar::GraphSpec spec;
  spec.core_vertices = {"O"};
  spec.origin = "O";
  for (int i = 0; i < k; ++i) spec.rays.push_back({"r" + std::to_string(i + 1), "O"});
  return fkstar::build_star_like(spec);
}

inline fkstar::StarLikeGraph line() {
  fkstar::GraphSpec spec;
  spec.core_vertices = {"O"};
  spec.origin = "O";
  spec.rays = {{"right", "O"}, {"left", "O"}};
  return fkstar::build_star_like(spec);
}

// Explicit segment graph: one node per death-free interval, one link per
// bridge, plus a supernode for wired closure. Components by BFS.
struct SegmentGraph {
  struct Seg {
    int line;
    double lo, hi;  // open interval; for a wrapped periodic segment lo > hi
  };
  std::vector<Seg> segs;
  std::vector<std::vector<int>> adj;
  int super = -1;
  bool super_used = false;

  int find_seg(int line, double t) const {
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
      const Seg& g = segs[s];
      if (g.line != line) continue;
      bool inside = g.lo < g.hi ? (g.lo < t && t < g.hi) : (t > g.lo || t < g.hi);
      if (inside) return s;
    }
    return -1;
  }

  void connect(int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  int components() const {
    std::vector<char> seen(adj.size(), 0);
    int k = 0;
    for (int s = 0; s < static_cast<int>(adj.size()); ++s) {
      if (seen[s] || (s == super && !super_used)) continue;
      ++k;
      std::deque<int> queue{s};
      seen[s] = 1;
      while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int y : adj[x]) {
          if (!seen[y]) {
            seen[y] = 1;
            queue.push_back(y);
          }
        }
      }
    }
    return k;
  }
};

inline SegmentGraph build_segment_graph(const fkstar::Configuration& c, const fkstar::Region& r) {
  using namespace fkstar;
  SegmentGraph g;
  const double inf = 1e300;
  for (int i = 0; i < r.vertex_line_count(); ++i) {
    const auto& vl = r.vertex_lines()[i];
    std::vector<double> cuts;
    auto it = c.deaths().find(vl.vertex);
    if (it != c.deaths().end()) {
      for (double t : it->second) {
        bool in = r.periodic() ? (vl.window.lo <= t && t < vl.window.hi) : vl.window.contains(t);
        if (in) cuts.push_back(t);
      }
    }
    if (cuts.empty()) {
      g.segs.push_back({i, -inf, inf});
    } else if (r.periodic()) {
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) g.segs.push_back({i, cuts[k], cuts[k + 1]});
      g.segs.push_back({i, cuts.back(), cuts.front()});  // wraps through the identified ends
    } else {
      g.segs.push_back({i, -inf, cuts.front()});
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) g.segs.push_back({i, cuts[k], cuts[k + 1]});
      g.segs.push_back({i, cuts.back(), inf});
    }
  }
  if (r.periodic()) {
    // a single cut on a periodic line leaves one segment wrapping around
    for (auto& s : g.segs) {
      if (s.lo == s.hi) s = {s.line, -inf, inf};
    }
  }
  g.super = static_cast<int>(g.segs.size());
  g.adj.assign(g.segs.size() + 1, {});
  bool wired = r.bc() == Boundary::kWired;
  for (int j = 0; j < r.edge_line_count(); ++j) {
    const auto& el = r.edge_lines()[j];
    auto it = c.bridges().find(el.edge);
    if (it == c.bridges().end()) continue;
    for (double t : it->second) {
      bool in = r.periodic() ? (el.window.lo <= t && t < el.window.hi) : el.window.contains(t);
      if (!in) continue;
      if (!el.dangling()) {
        g.connect(g.find_seg(el.ends[0], t), g.find_seg(el.ends[1], t));
      } else if (wired) {
        g.connect(g.find_seg(el.inside_end(), t), g.super);
        g.super_used = true;
      }
    }
  }
  if (wired) {
    for (int s = 0; s < g.super; ++s) {
      if (g.segs[s].lo == -inf || g.segs[s].hi == inf) {
        g.connect(s, g.super);
        g.super_used = true;
      }
    }
  }
  return g;
}

inline int bfs_cluster_count(const fkstar::Configuration& c, const fkstar::Region& r) {
  return build_segment_graph(c, r).components();
}

// Two-vertex quantum Ising closed forms with a = lambda / 2, b = 2 delta.
inline double two_vertex_ground_correlation(double lambda, double delta) {
  double a = lambda / 2.0, b = 2.0 * delta;
  return a / std::sqrt(a * a + b * b);
}

inline double two_vertex_beta_correlation(double lambda, double delta, double beta) {
  double a = lambda / 2.0, b = 2.0 * delta;
  double r = std::sqrt(a * a + b * b);
  return (std::sinh(beta * r) * a / r + std::sinh(beta * a)) / (std::cosh(beta * r) + std::cosh(beta * a));
}

// P((O,0) reaches t = +-n on its own line) with no bridges: free measure, any q.
inline double lambda_zero_reach_q1(double delta, double n) { return 2.0 * std::exp(-delta * n) - std::exp(-2.0 * delta * n); }

}  // namespace oracle
