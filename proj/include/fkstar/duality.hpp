#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fkstar/cluster.hpp"
#include "fkstar/config.hpp"
#include "fkstar/estimate.hpp"
#include "fkstar/graph.hpp"
#include "fkstar/sampler.hpp"

namespace fkstar {

// omega_dual = (D, B) on the line-hypergraph: deaths on sites (edges of G),
// hyperbridges on hyperedges (vertices of G), times kept exactly.
struct DualConfiguration {
  std::map<EdgeAddress, std::vector<double>> deaths;
  std::map<VertexAddress, std::vector<double>> hyperbridges;

  std::size_t death_count() const;
  std::size_t hyperbridge_count() const;
  friend bool operator==(const DualConfiguration&, const DualConfiguration&) = default;
};

// NotFound for events off the graph.
DualConfiguration dualize(const Configuration& c, const Graph& g);
Configuration undualize(const DualConfiguration& d);

// On Z the hypergraph is Z again: site (a, a+1) is dual vertex a and the
// hyperedge of vertex a is the dual edge (a-1, a). KindMismatch off Z.
Configuration dual_as_line_configuration(const DualConfiguration& d, const Graph& g);

// (q, lambda, delta, b) -> (q, q delta, lambda / q, 1 - b). Periodic stays periodic.
RCParams dual_parameters(const RCParams& p);
Boundary dual_boundary(Boundary b);

// Cluster labeling of omega_dual on the region's edge lines: cuts at bridges,
// hyperbridges at deaths joining all incident edge lines. The dual closure is
// dual_boundary(r.bc()): wired ties the window ends and every edge line whose
// edge leaves the region. `holes` (one optional window per edge line) removes
// points from the dual lines.
ClusterLabeling label_dual(const Region& r, const LineEvents& ev,
                           const std::vector<std::optional<Window>>* holes = nullptr);

struct DualityRow {
  std::string event_id;
  double primal_est = 0.0;
  double primal_se = 0.0;
  double dual_est = 0.0;
  double dual_se = 0.0;
  double z = 0.0;
};

struct DualityReport {
  RCParams params;       // the dualized chain's parameters
  RCParams dual_params;  // the direct chain's parameters
  std::string primal_region;
  std::string direct_region;
  std::vector<DualityRow> rows;
  double z_limit = 3.0;

  double pass_fraction() const;
};

// Samples Lambda_n on Z at p, dualizes every sample, and compares a family of
// twenty two-point connection events of the dual with direct samples at
// dual_parameters(p) on the matching dual window: a free rectangle
// [-n-1, n] x [-n, n] when p is wired, a wired rectangle [-n, n-1] x [-n, n]
// (edges leaving it included) when p is free. KindMismatch off Z.
DualityReport duality_check(const StarLikeGraph& g, const RCParams& p, std::int64_t n, const Schedule& primal_schedule,
                            const Schedule& direct_schedule, int chains = 1);

// event_id,primal_est,primal_se,dual_est,dual_se,z
std::string duality_csv(const DualityReport& report);

}  // namespace fkstar
