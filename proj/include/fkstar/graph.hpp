#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fkstar/error.hpp"

namespace fkstar {

inline constexpr int kCoreRay = -1;

// A vertex is either a core vertex (ray == kCoreRay, index into the core list)
// or the index-th vertex (index >= 1) along a ray. Position 0 of a ray is its
// attachment vertex, which is a core vertex and is never addressed as (ray, 0).
struct VertexAddress {
  int ray = kCoreRay;
  std::int64_t index = 0;

  friend auto operator<=>(const VertexAddress&, const VertexAddress&) = default;
};

// A core edge (index into the core edge list) or the index-th edge of a ray,
// joining ray positions index-1 and index.
struct EdgeAddress {
  int ray = kCoreRay;
  std::int64_t index = 0;

  friend auto operator<=>(const EdgeAddress&, const EdgeAddress&) = default;
};

struct RaySpec {
  std::string id;
  std::string attach;

  friend bool operator==(const RaySpec&, const RaySpec&) = default;
};

// Serializable description of a graph: a finite core plus rays.
struct GraphSpec {
  std::vector<std::string> core_vertices;
  std::vector<std::array<std::string, 2>> core_edges;
  std::vector<RaySpec> rays;
  std::string origin;

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

GraphSpec parse_graph_spec(std::string_view json_text);
std::string serialize_graph_spec(const GraphSpec& spec);
GraphSpec load_graph_spec(const std::string& path);

// Topology shared by the star-like and the finite graph types. Immutable.
class Graph {
 public:
  const GraphSpec& spec() const { return spec_; }
  int core_size() const { return static_cast<int>(spec_.core_vertices.size()); }
  int core_edge_count() const { return static_cast<int>(core_edges_.size()); }
  int ray_count() const { return static_cast<int>(ray_attach_.size()); }
  int ray_attach(int ray) const { return ray_attach_.at(ray); }

  VertexAddress origin() const { return {kCoreRay, origin_}; }

  bool contains(VertexAddress v) const;
  bool contains(EdgeAddress e) const;

  std::array<VertexAddress, 2> endpoints(EdgeAddress e) const;
  std::vector<EdgeAddress> incident_edges(VertexAddress v) const;
  int degree(VertexAddress v) const;

  // Graph distance to the origin.
  std::int64_t distance_to_origin(VertexAddress v) const;

  // The bi-infinite path: origin alone in the core with exactly two rays.
  bool is_line() const;

  std::string vertex_name(VertexAddress v) const;
  std::string edge_name(EdgeAddress e) const;
  VertexAddress find_vertex(std::string_view name) const;
  EdgeAddress find_edge(std::string_view name) const;

 protected:
  explicit Graph(GraphSpec spec);

  GraphSpec spec_;
  std::vector<std::array<int, 2>> core_edges_;
  std::vector<int> ray_attach_;
  std::vector<std::vector<EdgeAddress>> core_incidence_;
  std::vector<std::int64_t> core_distance_;  // -1 when unreachable from the origin
  std::map<std::string, int, std::less<>> core_index_;
  std::map<std::string, int, std::less<>> ray_index_;
  int origin_ = 0;
};

// Countably infinite, connected, finitely many vertices of degree > 2.
class StarLikeGraph : public Graph {
 private:
  explicit StarLikeGraph(GraphSpec spec) : Graph(std::move(spec)) {}
  friend StarLikeGraph build_star_like(const GraphSpec& spec);
};

// A finite graph: a core with no rays. Used by the exact-diagonalization
// oracle and the periodic-time regions that mirror it.
class FiniteGraph : public Graph {
 public:
  int vertex_count() const { return core_size(); }
  const std::vector<std::array<int, 2>>& edges() const { return core_edges_; }

 private:
  explicit FiniteGraph(GraphSpec spec) : Graph(std::move(spec)) {}
  friend FiniteGraph build_finite_graph(const GraphSpec& spec);
};

// Errors: DisconnectedGraph, BadOrigin, DuplicateEdge, UnknownVertex.
StarLikeGraph build_star_like(const GraphSpec& spec);

// Errors: DuplicateEdge, UnknownVertex, InvalidArgument (if rays are present).
FiniteGraph build_finite_graph(const GraphSpec& spec);

// Keeps the core and the first arm_length vertices of every ray.
FiniteGraph truncate(const StarLikeGraph& g, std::int64_t arm_length);

// Sites are the edges of G; the hyperedge of a vertex is its incident edge set.
class LineHypergraph {
 public:
  explicit LineHypergraph(const StarLikeGraph& g);

  std::vector<EdgeAddress> hyperedge(VertexAddress v) const;
  int hyperedge_size(VertexAddress v) const;

  // Vertices whose hyperedge has more than two sites. Always a finite set.
  std::vector<VertexAddress> polygonal_hyperedges() const;

  // Finite window of the (infinite) hypergraph: sites with an endpoint within
  // `radius` of the origin, hyperedges of vertices within `radius`.
  std::vector<EdgeAddress> sites(std::int64_t radius) const;
  std::vector<VertexAddress> hyperedge_ids(std::int64_t radius) const;

  // True when every hyperedge has at most two sites.
  bool is_graph() const { return polygonal_hyperedges().empty(); }

 private:
  StarLikeGraph graph_;
};

LineHypergraph line_hypergraph(const StarLikeGraph& g);

}  // namespace fkstar
