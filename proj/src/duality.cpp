#include "fkstar/duality.hpp"

#include <fmt/format.h>

namespace fkstar {

std::size_t DualConfiguration::death_count() const {
  std::size_t n = 0;
  for (const auto& [e, times] : deaths) n += times.size();
  return n;
}

std::size_t DualConfiguration::hyperbridge_count() const {
  std::size_t n = 0;
  for (const auto& [v, times] : hyperbridges) n += times.size();
  return n;
}

DualConfiguration dualize(const Configuration& c, const Graph& g) {
  DualConfiguration d;
  for (const auto& [e, times] : c.bridges()) {
    if (!g.contains(e)) throw Error(ErrorCode::kNotFound, "bridge on an edge not in the graph");
    d.deaths[e] = times;
  }
  for (const auto& [v, times] : c.deaths()) {
    if (!g.contains(v)) throw Error(ErrorCode::kNotFound, "death on a vertex not in the graph");
    d.hyperbridges[v] = times;
  }
  return d;
}

Configuration undualize(const DualConfiguration& d) { return Configuration::from_maps(d.deaths, d.hyperbridges); }

Configuration dual_as_line_configuration(const DualConfiguration& d, const Graph& g) {
  if (!g.is_line()) throw Error(ErrorCode::kKindMismatch, "the dual is a line graph only for Z");
  std::map<EdgeAddress, std::vector<double>> bridges;
  std::map<VertexAddress, std::vector<double>> deaths;
  for (const auto& [e, times] : d.deaths) deaths[line_vertex(line_edge_coordinate(e))] = times;
  for (const auto& [v, times] : d.hyperbridges) bridges[line_edge(line_coordinate(v) - 1)] = times;
  return Configuration::from_maps(std::move(bridges), std::move(deaths));
}

Boundary dual_boundary(Boundary b) {
  switch (b) {
    case Boundary::kFree: return Boundary::kWired;
    case Boundary::kWired: return Boundary::kFree;
    case Boundary::kPeriodic: return Boundary::kPeriodic;
  }
  return b;
}

RCParams dual_parameters(const RCParams& p) {
  if (!(p.q >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "q must be >= 1");
  return {p.q * p.delta, p.lambda / p.q, p.q, dual_boundary(p.bc)};
}

ClusterLabeling label_dual(const Region& r, const LineEvents& ev, const std::vector<std::optional<Window>>* holes) {
  if (holes && holes->size() != static_cast<std::size_t>(r.edge_line_count())) {
    throw Error(ErrorCode::kInvalidArgument, "one hole entry per edge line expected");
  }
  ClusterLabeling labeling(r.periodic());
  for (int j = 0; j < r.edge_line_count(); ++j) {
    labeling.add_line(r.edge_lines()[j].window, ev.bridges[j], false, holes ? (*holes)[j] : std::nullopt);
  }
  for (int i = 0; i < r.vertex_line_count(); ++i) {
    const auto& edges = r.vertex_lines()[i].edges;
    for (double t : ev.deaths[i]) labeling.link_hyper(edges, t);
  }
  if (dual_boundary(r.bc()) == Boundary::kWired) {
    labeling.attach_window_ends();
    for (int j = 0; j < r.edge_line_count(); ++j) {
      if (r.edge_lines()[j].dangling()) labeling.attach_whole_line(j);
    }
  }
  return labeling;
}

double DualityReport::pass_fraction() const {
  if (rows.empty()) return 0.0;
  int ok = 0;
  for (const auto& row : rows) ok += std::abs(row.z) <= z_limit ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(rows.size());
}

namespace {

struct PairEvent {
  std::string id;
  std::int64_t a0;
  double t0;
  std::int64_t a1;
  double t1;
};

std::vector<PairEvent> duality_events() {
  std::vector<PairEvent> out;
  for (int d = 0; d <= 3; ++d) {
    for (double s : {0.0, 0.5, 1.0, 1.5, 2.0}) {
      double t = (d == 0 && s == 0.0) ? 2.5 : s;
      out.push_back({fmt::format("c{}_{}", d, t), 0, 0.0, d, t});
    }
  }
  return out;
}

bool same_cluster(const ClusterLabeling& lab, int line0, double t0, int line1, double t1) {
  auto a = lab.try_segment_at(line0, t0);
  auto b = lab.try_segment_at(line1, t1);
  return a && b && lab.connected(*a, *b);
}

}  // namespace

DualityReport duality_check(const StarLikeGraph& g, const RCParams& p, std::int64_t n, const Schedule& primal_schedule,
                            const Schedule& direct_schedule, int chains) {
  if (!g.is_line()) throw Error(ErrorCode::kKindMismatch, "duality_check needs the line graph Z");
  if (p.bc == Boundary::kPeriodic) throw Error(ErrorCode::kInvalidArgument, "duality_check compares free and wired windows");
  if (n < 4) throw Error(ErrorCode::kInvalidArgument, "duality_check needs n >= 4 for bulk events");
  p.validate();

  DualityReport report;
  report.params = p;
  report.dual_params = dual_parameters(p);
  Region primal = lambda_region(g, n, p.bc);
  double h = static_cast<double>(n);
  Region direct = p.bc == Boundary::kWired ? rectangle_region(g, -n - 1, n, -h, h, Boundary::kFree)
                                           : rectangle_region(g, -n, n - 1, -h, h, Boundary::kWired);
  report.primal_region = primal.label();
  report.direct_region = direct.label();

  auto events = duality_events();
  std::vector<std::array<int, 2>> dual_lines, direct_lines;
  for (const auto& e : events) {
    dual_lines.push_back({*primal.find_edge_line(line_edge(e.a0)), *primal.find_edge_line(line_edge(e.a1))});
    direct_lines.push_back({*direct.line_at(e.a0), *direct.line_at(e.a1)});
  }

  TallySet init(events.size());
  TallySet dual_tallies = run_chains(primal, p, primal_schedule, chains, init, [&](TallySet& acc, const SampleView& v) {
    ClusterLabeling lab = label_dual(v.region, v.events);
    for (std::size_t i = 0; i < events.size(); ++i) {
      acc[i].add(same_cluster(lab, dual_lines[i][0], events[i].t0, dual_lines[i][1], events[i].t1) ? 1.0 : 0.0);
    }
  });
  TallySet direct_tallies =
      run_chains(direct, report.dual_params, direct_schedule, chains, init, [&](TallySet& acc, const SampleView& v) {
        for (std::size_t i = 0; i < events.size(); ++i) {
          acc[i].add(same_cluster(v.labeling, direct_lines[i][0], events[i].t0, direct_lines[i][1], events[i].t1) ? 1.0
                                                                                                                 : 0.0);
        }
      });

  for (std::size_t i = 0; i < events.size(); ++i) {
    DualityRow row;
    row.event_id = events[i].id;
    row.primal_est = direct_tallies[i].mean();
    row.primal_se = direct_tallies[i].std_error();
    row.dual_est = dual_tallies[i].mean();
    row.dual_se = dual_tallies[i].std_error();
    row.z = z_score(row.primal_est, row.primal_se, row.dual_est, row.dual_se);
    report.rows.push_back(row);
  }
  return report;
}

std::string duality_csv(const DualityReport& report) {
  std::string out = "event_id,primal_est,primal_se,dual_est,dual_se,z\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{}\n", r.event_id, r.primal_est, r.primal_se, r.dual_est, r.dual_se, r.z);
  }
  return out;
}

}  // namespace fkstar
