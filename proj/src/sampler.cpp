#include "fkstar/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "json.hpp"

namespace fkstar {

void RCParams::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  if (!std::isfinite(delta) || delta <= 0.0) throw Error(ErrorCode::kInvalidArgument, "delta must be > 0");
  if (!std::isfinite(q) || q < 1.0) throw Error(ErrorCode::kInvalidArgument, "q must be >= 1");
}

const char* to_string(MoveKind m) {
  switch (m) {
    case MoveKind::kBirthDeath: return "birth-death";
    case MoveKind::kCluster: return "cluster";
    case MoveKind::kDirect: return "direct";
  }
  return "?";
}

MoveKind parse_move(std::string_view text) {
  if (text == "birth-death" || text == "mh") return MoveKind::kBirthDeath;
  if (text == "cluster" || text == "sw") return MoveKind::kCluster;
  if (text == "direct") return MoveKind::kDirect;
  throw Error(ErrorCode::kInvalidArgument, "unknown move '" + std::string(text) + "' (birth-death, cluster, direct)");
}

Schedule default_schedule(const Region& r, MoveKind move, std::int64_t n_samples, std::uint64_t seed) {
  Schedule s;
  s.n_samples = n_samples;
  s.seed = seed;
  s.move = move;
  switch (move) {
    case MoveKind::kBirthDeath:
      s.burn_in = 10000 * static_cast<std::int64_t>(r.line_count());
      s.thinning = r.line_count();
      break;
    case MoveKind::kCluster:
      s.burn_in = 1000;
      s.thinning = 1;
      break;
    case MoveKind::kDirect:
      s.burn_in = 0;
      s.thinning = 1;
      break;
  }
  return s;
}

namespace {

std::vector<double> cumulative_lengths(const std::vector<Window>& windows) {
  std::vector<double> out;
  double total = 0.0;
  for (const auto& w : windows) {
    total += w.length();
    out.push_back(total);
  }
  return out;
}

// Poisson points on [lo, hi) by exponential gaps, appended in increasing order.
void poisson_on(const Window& w, double rate, Rng& rng, std::vector<double>& out) {
  if (rate <= 0.0) return;
  double t = w.lo + rng.exponential(rate);
  while (t < w.hi) {
    out.push_back(t);
    t += rng.exponential(rate);
  }
}

double power(double q, int dk) { return dk == 0 ? 1.0 : std::pow(q, dk); }

// ---- breadth-first search over the segment graph of a configuration ----

// Segment k of a vertex line: k = number of deaths at or before t, with the
// periodic wrap folding the last segment into the first.
int segment_index(const std::vector<double>& deaths, double t, bool periodic) {
  int k = static_cast<int>(std::upper_bound(deaths.begin(), deaths.end(), t) - deaths.begin());
  if (periodic && k == static_cast<int>(deaths.size())) k = 0;
  return k;
}

class SegmentSearch {
 public:
  SegmentSearch(const Region& r, const LineEvents& ev) : r_(r), ev_(ev), wired_(r.bc() == Boundary::kWired) {
    offset_.resize(r.vertex_line_count() + 1, 0);
    for (int i = 0; i < r.vertex_line_count(); ++i) offset_[i + 1] = offset_[i] + segment_total(i);
    super_ = offset_.back();
    seen_.assign(super_ + 1, 0);
  }

  int supernode() const { return super_; }
  int node(int line, int k) const { return offset_[line] + k; }
  int node_at(int line, double t) const { return node(line, segment_index(ev_.deaths[line], t, r_.periodic())); }

  bool reachable(int from, int to) {
    if (from == to) return true;
    std::deque<int> queue{from};
    seen_[from] = 1;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      bool found = false;
      visit_neighbors(x, [&](int y) {
        if (y == to) found = true;
        if (!seen_[y]) {
          seen_[y] = 1;
          queue.push_back(y);
        }
      });
      if (found) return true;
    }
    return false;
  }

 private:
  int segment_total(int line) const {
    int m = static_cast<int>(ev_.deaths[line].size());
    return r_.periodic() ? std::max(m, 1) : m + 1;
  }

  int line_of(int node) const {
    return static_cast<int>(std::upper_bound(offset_.begin(), offset_.end(), node) - offset_.begin()) - 1;
  }

  // Bridges of edge line j with time in (a, b), reported to f.
  template <class F>
  void bridges_in(int j, double a, double b, F&& f) const {
    const auto& times = ev_.bridges[j];
    for (auto it = std::upper_bound(times.begin(), times.end(), a); it != times.end() && *it < b; ++it) f(*it);
  }

  template <class F>
  void visit_neighbors(int x, F&& f) const {
    if (x == super_) {
      for (int i = 0; i < r_.vertex_line_count(); ++i) {
        f(node(i, 0));
        f(node(i, segment_total(i) - 1));
      }
      for (int j = 0; j < r_.edge_line_count(); ++j) {
        const auto& e = r_.edge_lines()[j];
        if (!e.dangling()) continue;
        for (double t : ev_.bridges[j]) f(node_at(e.inside_end(), t));
      }
      return;
    }
    int line = line_of(x);
    int k = x - offset_[line];
    const auto& d = ev_.deaths[line];
    const auto& vl = r_.vertex_lines()[line];
    int m = static_cast<int>(d.size());
    int last = segment_total(line) - 1;
    if (wired_ && (k == 0 || k == last)) f(super_);
    // Time intervals covered by the segment (two pieces when it wraps).
    double lo = vl.window.lo - 1.0, hi = vl.window.hi + 1.0;
    std::array<std::pair<double, double>, 2> pieces{};
    int n_pieces = 1;
    if (r_.periodic() && m > 0 && k == 0) {
      pieces[0] = {lo, d[0]};
      pieces[1] = {d[m - 1], hi};
      n_pieces = 2;
    } else {
      pieces[0] = {k == 0 ? lo : d[k - 1], k == m ? hi : d[k]};
    }
    for (int j : vl.edges) {
      const auto& e = r_.edge_lines()[j];
      for (int p = 0; p < n_pieces; ++p) {
        bridges_in(j, pieces[p].first, pieces[p].second, [&](double t) {
          if (!e.dangling()) {
            int other = e.ends[0] == line ? e.ends[1] : e.ends[0];
            f(node_at(other, t));
          } else if (wired_) {
            f(super_);
          }
        });
      }
    }
  }

  const Region& r_;
  const LineEvents& ev_;
  bool wired_;
  std::vector<int> offset_;
  int super_ = 0;
  std::vector<char> seen_;
};

// The two nodes an edge-line bridge at t would join; -1 when it joins nothing.
std::pair<int, int> bridge_ends(const Region& r, const SegmentSearch& g, int j, double t) {
  const auto& e = r.edge_lines()[j];
  if (!e.dangling()) return {g.node_at(e.ends[0], t), g.node_at(e.ends[1], t)};
  if (r.bc() == Boundary::kWired) return {g.node_at(e.inside_end(), t), g.supernode()};
  return {-1, -1};
}

void erase_value(std::vector<double>& v, double t) {
  auto it = std::lower_bound(v.begin(), v.end(), t);
  if (it == v.end() || *it != t) throw Error(ErrorCode::kNotFound, "no event at that time");
  v.erase(it);
}

void insert_value(std::vector<double>& v, double t) { v.insert(std::upper_bound(v.begin(), v.end(), t), t); }

}  // namespace

int delta_k_bfs(const Region& r, LineEvents& ev, MoveType move, int line, double t) {
  switch (move) {
    case kInsertBridge: {
      SegmentSearch g(r, ev);
      auto [a, b] = bridge_ends(r, g, line, t);
      if (a < 0) return 0;
      return g.reachable(a, b) ? 0 : -1;
    }
    case kDeleteBridge: {
      erase_value(ev.bridges[line], t);
      SegmentSearch g(r, ev);
      auto [a, b] = bridge_ends(r, g, line, t);
      bool joined = a < 0 || g.reachable(a, b);
      insert_value(ev.bridges[line], t);
      return joined ? 0 : 1;
    }
    case kInsertDeath: {
      insert_value(ev.deaths[line], t);
      SegmentSearch g(r, ev);
      const auto& d = ev.deaths[line];
      int k = static_cast<int>(std::lower_bound(d.begin(), d.end(), t) - d.begin());
      int m = static_cast<int>(d.size());
      int left = g.node(line, k);
      int right = g.node(line, r.periodic() ? (k + 1) % m : k + 1);
      bool joined = g.reachable(left, right);
      erase_value(ev.deaths[line], t);
      return joined ? 0 : 1;
    }
    case kDeleteDeath: {
      SegmentSearch g(r, ev);
      const auto& d = ev.deaths[line];
      int k = static_cast<int>(std::lower_bound(d.begin(), d.end(), t) - d.begin());
      int m = static_cast<int>(d.size());
      if (k == m || d[k] != t) throw Error(ErrorCode::kNotFound, "no death at that time");
      int left = g.node(line, k);
      int right = g.node(line, r.periodic() ? (k + 1) % m : k + 1);
      return g.reachable(left, right) ? 0 : -1;
    }
  }
  return 0;
}

ChainState::ChainState(std::shared_ptr<const Region> region, LineEvents events)
    : region_(std::move(region)), labeling_(region_->periodic()) {
  std::vector<Window> ew, vw;
  for (const auto& e : region_->edge_lines()) ew.push_back(e.window);
  for (const auto& v : region_->vertex_lines()) vw.push_back(v.window);
  edge_cumulative_ = cumulative_lengths(ew);
  vertex_cumulative_ = cumulative_lengths(vw);
  set_events(std::move(events));
}

ChainState::ChainState(std::shared_ptr<const Region> region) : ChainState(region, LineEvents(*region)) {}

void ChainState::set_events(LineEvents events) {
  if (events.deaths.size() != static_cast<std::size_t>(region_->vertex_line_count()) ||
      events.bridges.size() != static_cast<std::size_t>(region_->edge_line_count())) {
    throw Error(ErrorCode::kInvalidArgument, "line events do not match the region");
  }
  events_ = std::move(events);
  n_bridges_ = events_.bridge_count();
  n_deaths_ = events_.death_count();
  invalidate();
}

const ClusterLabeling& ChainState::labeling() {
  if (!labeling_valid_) {
    labeling_ = label_clusters(*region_, events_);
    labeling_valid_ = true;
  }
  return labeling_;
}

int ChainState::k() { return labeling().components(); }

int ChainState::pick_line(const std::vector<double>& cumulative, double u) const {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  if (it == cumulative.end()) --it;
  return static_cast<int>(it - cumulative.begin());
}

namespace {

// Picks the idx-th event across lines; returns (line, position).
std::pair<int, int> pick_event(const std::vector<std::vector<double>>& lines, std::uint64_t idx) {
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    if (idx < lines[i].size()) return {i, static_cast<int>(idx)};
    idx -= lines[i].size();
  }
  throw Error(ErrorCode::kNotFound, "event index out of range");
}

double uniform_in(const Window& w, Rng& rng) { return w.lo + rng.uniform() * w.length(); }

}  // namespace

StepResult mcmc_step(ChainState& s, const RCParams& p, Rng& rng) {
  const Region& r = *s.region_;
  LineEvents& ev = s.events_;
  bool use_q = p.q != 1.0;
  bool wired = r.bc() == Boundary::kWired;
  StepResult out;
  out.move = static_cast<MoveType>(rng.below(4));
  ++s.steps_;
  ++s.stats_[out.move].proposed;
  double u_accept = 1.0;

  switch (out.move) {
    case kInsertBridge: {
      if (r.edge_line_count() == 0 || p.lambda == 0.0) return out;
      int j = s.pick_line(s.edge_cumulative_, rng.uniform());
      const auto& e = r.edge_lines()[j];
      double t = uniform_in(e.window, rng);
      u_accept = rng.uniform();
      if (std::binary_search(ev.bridges[j].begin(), ev.bridges[j].end(), t)) return out;
      for (int end : e.ends) {
        if (end != kOutside && std::binary_search(ev.deaths[end].begin(), ev.deaths[end].end(), t)) return out;
      }
      int a = -1, b = -1;
      if (use_q) {
        const auto& lab = s.labeling();
        if (!e.dangling()) {
          a = lab.segment_at(e.ends[0], t);
          b = lab.segment_at(e.ends[1], t);
        } else if (wired) {
          a = lab.segment_at(e.inside_end(), t);
          b = lab.supernode();
        }
        out.dk = (a < 0 || lab.connected(a, b)) ? 0 : -1;
      }
      out.ratio = p.lambda * s.edge_length() / static_cast<double>(s.n_bridges_ + 1) * power(p.q, out.dk);
      if (u_accept < out.ratio) {
        insert_value(ev.bridges[j], t);
        ++s.n_bridges_;
        if (!use_q) {
          s.invalidate();
        } else if (a >= 0) {
          s.labeling_.link(a, b);
        }
        out.accepted = true;
      }
      break;
    }
    case kDeleteBridge: {
      if (s.n_bridges_ == 0) return out;
      auto [j, pos] = pick_event(ev.bridges, rng.below(s.n_bridges_));
      double t = ev.bridges[j][pos];
      u_accept = rng.uniform();
      if (use_q) out.dk = delta_k_bfs(r, ev, kDeleteBridge, j, t);
      out.ratio = static_cast<double>(s.n_bridges_) / (p.lambda * s.edge_length()) * power(p.q, out.dk);
      if (u_accept < out.ratio) {
        ev.bridges[j].erase(ev.bridges[j].begin() + pos);
        --s.n_bridges_;
        s.invalidate();
        out.accepted = true;
      }
      break;
    }
    case kInsertDeath: {
      if (r.vertex_line_count() == 0) return out;
      int i = s.pick_line(s.vertex_cumulative_, rng.uniform());
      const auto& vl = r.vertex_lines()[i];
      double t = uniform_in(vl.window, rng);
      u_accept = rng.uniform();
      if (std::binary_search(ev.deaths[i].begin(), ev.deaths[i].end(), t)) return out;
      for (int j : vl.edges) {
        if (std::binary_search(ev.bridges[j].begin(), ev.bridges[j].end(), t)) return out;
      }
      if (use_q) out.dk = delta_k_bfs(r, ev, kInsertDeath, i, t);
      out.ratio = p.delta * s.vertex_length() / static_cast<double>(s.n_deaths_ + 1) * power(p.q, out.dk);
      if (u_accept < out.ratio) {
        insert_value(ev.deaths[i], t);
        ++s.n_deaths_;
        s.invalidate();
        out.accepted = true;
      }
      break;
    }
    case kDeleteDeath: {
      if (s.n_deaths_ == 0) return out;
      auto [i, pos] = pick_event(ev.deaths, rng.below(s.n_deaths_));
      const auto& d = ev.deaths[i];
      u_accept = rng.uniform();
      if (use_q) {
        int m = static_cast<int>(d.size());
        if (r.periodic() && m == 1) {
          out.dk = 0;
        } else {
          const auto& lab = s.labeling();
          int first = lab.first_segment(i);
          int left = first + pos;
          int right = first + (r.periodic() ? (pos + 1) % m : pos + 1);
          out.dk = lab.connected(left, right) ? 0 : -1;
        }
      }
      out.ratio = static_cast<double>(s.n_deaths_) / (p.delta * s.vertex_length()) * power(p.q, out.dk);
      if (u_accept < out.ratio) {
        ev.deaths[i].erase(ev.deaths[i].begin() + pos);
        --s.n_deaths_;
        s.invalidate();
        out.accepted = true;
      }
      break;
    }
  }
  if (out.accepted) ++s.stats_[out.move].accepted;
  return out;
}

void sw_sweep(ChainState& s, const RCParams& p, Rng& rng) {
  if (p.q != 2.0) throw Error(ErrorCode::kUnsupportedQ, "the cluster sweep needs q = 2");
  const Region& r = *s.region_;
  const ClusterLabeling& lab = s.labeling();
  bool wired = r.bc() == Boundary::kWired;

  // (i) one fair coin per cluster, the supernode's cluster included
  int n_nodes = lab.segment_count() + 1;
  auto& spin = s.spin_;
  spin.assign(n_nodes, 0);
  for (int x = 0; x < n_nodes; ++x) {
    if (lab.find(x) == x) spin[x] = rng.coin() ? 1 : 2;
  }
  for (int x = 0; x < n_nodes; ++x) spin[x] = spin[lab.find(x)];

  auto& next = s.next_;
  next.resize(r.line_count());
  std::vector<double> fresh;
  std::vector<int> seg_a, seg_b;

  // (ii) deaths: the spin-flip points plus fresh Poisson(delta)
  for (int i = 0; i < r.vertex_line_count(); ++i) {
    auto cuts = lab.cuts(i);
    int first = lab.first_segment(i);
    int m = static_cast<int>(cuts.size());
    auto& out = next[i];
    out.clear();
    fresh.clear();
    poisson_on(r.vertex_lines()[i].window, p.delta, rng, fresh);
    std::size_t f = 0;
    for (int c = 0; c < m; ++c) {
      int right = r.periodic() ? (c + 1) % m : c + 1;
      if (spin[first + c] == spin[first + right]) continue;
      while (f < fresh.size() && fresh[f] < cuts[c]) out.push_back(fresh[f++]);
      out.push_back(cuts[c]);
    }
    while (f < fresh.size()) out.push_back(fresh[f++]);
  }

  // (iii) bridges: Poisson(lambda) kept where the endpoint spins agree
  int super = lab.supernode();
  for (int j = 0; j < r.edge_line_count(); ++j) {
    const auto& e = r.edge_lines()[j];
    auto& out = next[r.vertex_line_count() + j];
    out.clear();
    fresh.clear();
    poisson_on(e.window, p.lambda, rng, fresh);
    if (!e.dangling()) {
      lab.segments_at(e.ends[0], fresh, seg_a);
      lab.segments_at(e.ends[1], fresh, seg_b);
      for (std::size_t k = 0; k < fresh.size(); ++k) {
        if (seg_a[k] >= 0 && seg_b[k] >= 0 && spin[seg_a[k]] == spin[seg_b[k]]) out.push_back(fresh[k]);
      }
    } else if (wired) {
      lab.segments_at(e.inside_end(), fresh, seg_a);
      for (std::size_t k = 0; k < fresh.size(); ++k) {
        if (seg_a[k] >= 0 && spin[seg_a[k]] == spin[super]) out.push_back(fresh[k]);
      }
    } else {
      out = fresh;
    }
  }

  LineEvents& ev = s.events_;
  for (int i = 0; i < r.vertex_line_count(); ++i) ev.deaths[i].swap(next[i]);
  for (int j = 0; j < r.edge_line_count(); ++j) ev.bridges[j].swap(next[r.vertex_line_count() + j]);
  s.n_deaths_ = ev.death_count();
  s.n_bridges_ = ev.bridge_count();
  ++s.steps_;
  s.invalidate();
}

LineEvents sample_poisson_lines(const Region& r, double lambda, double delta, Rng& rng) {
  LineEvents ev(r);
  for (int i = 0; i < r.vertex_line_count(); ++i) poisson_on(r.vertex_lines()[i].window, delta, rng, ev.deaths[i]);
  for (int j = 0; j < r.edge_line_count(); ++j) poisson_on(r.edge_lines()[j].window, lambda, rng, ev.bridges[j]);
  return ev;
}

Configuration sample_poisson(const Region& r, const RCParams& p, Rng& rng) {
  if (p.lambda < 0.0 || p.delta < 0.0) throw Error(ErrorCode::kInvalidArgument, "intensities must be >= 0");
  return to_configuration(sample_poisson_lines(r, p.lambda, p.delta, rng), r);
}

void check_run(const Region& r, const RCParams& p, const Schedule& s) {
  p.validate();
  if (p.bc != r.bc()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("params say bc=") + to_string(p.bc) + " but region " + r.label() +
                                                 " is " + to_string(r.bc()));
  }
  if (s.burn_in < 0 || s.thinning < 1 || s.n_samples < 0) {
    throw Error(ErrorCode::kInvalidArgument, "schedule needs burn_in >= 0, thinning >= 1, n_samples >= 0");
  }
  if (s.move == MoveKind::kCluster && p.q != 2.0) throw Error(ErrorCode::kUnsupportedQ, "the cluster sweep needs q = 2");
  if (s.move == MoveKind::kDirect && p.q != 1.0) throw Error(ErrorCode::kUnsupportedQ, "direct sampling needs q = 1");
}

ChainDiagnostics run_chain(const Region& r, const RCParams& p, const Schedule& s,
                           const std::function<void(const SampleView&)>& visit, int chain) {
  check_run(r, p, s);
  Rng rng(s.seed, static_cast<std::uint64_t>(chain));
  auto region = std::make_shared<const Region>(r);
  ChainState state(region);
  ChainDiagnostics diag;

  auto advance = [&](std::int64_t steps) {
    for (std::int64_t k = 0; k < steps; ++k) {
      switch (s.move) {
        case MoveKind::kBirthDeath: mcmc_step(state, p, rng); break;
        case MoveKind::kCluster: sw_sweep(state, p, rng); break;
        case MoveKind::kDirect: state.set_events(sample_poisson_lines(*region, p.lambda, p.delta, rng)); break;
      }
    }
  };

  advance(s.burn_in);
  diag.k_trace.reserve(static_cast<std::size_t>(s.n_samples));
  for (std::int64_t n = 0; n < s.n_samples; ++n) {
    advance(s.thinning);
    const ClusterLabeling& lab = state.labeling();
    diag.k_trace.push_back(lab.components());
    visit(SampleView{*region, state.events(), lab, n, chain});
  }
  diag.moves = state.move_stats();
  diag.steps = state.steps();
  return diag;
}

std::string run_manifest(const Region& r, const RCParams& p, const Schedule& s, int chains) {
  nlohmann::ordered_json doc;
  doc["params"] = {{"q", p.q}, {"lambda", p.lambda}, {"delta", p.delta}, {"bc", to_string(p.bc)}};
  doc["region"] = {{"label", r.label()}, {"n", r.n()}, {"vertex_lines", r.vertex_line_count()},
                   {"edge_lines", r.edge_line_count()}};
  doc["schedule"] = {{"burn_in", s.burn_in}, {"n_samples", s.n_samples}, {"thinning", s.thinning},
                     {"move", to_string(s.move)}, {"chains", chains}};
  doc["seed"] = s.seed;
  return doc.dump(2) + "\n";
}

}  // namespace fkstar
