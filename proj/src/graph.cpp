#include "fkstar/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fkstar {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kUnknownVertex, "cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

GraphSpec parse_graph_spec(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  GraphSpec spec;
  try {
    for (const auto& v : doc.at("core_vertices")) spec.core_vertices.push_back(v.get<std::string>());
    if (doc.contains("core_edges")) {
      for (const auto& e : doc.at("core_edges")) {
        if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kParseError, "core edge must be a pair");
        spec.core_edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
      }
    }
    if (doc.contains("rays")) {
      for (const auto& r : doc.at("rays")) {
        spec.rays.push_back({r.at("id").get<std::string>(), r.at("attach").get<std::string>()});
      }
    }
    if (doc.contains("origin")) spec.origin = doc.at("origin").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return spec;
}

std::string serialize_graph_spec(const GraphSpec& spec) {
  nlohmann::ordered_json doc;
  doc["core_vertices"] = spec.core_vertices;
  doc["core_edges"] = nlohmann::ordered_json::array();
  for (const auto& e : spec.core_edges) doc["core_edges"].push_back({e[0], e[1]});
  doc["rays"] = nlohmann::ordered_json::array();
  for (const auto& r : spec.rays) doc["rays"].push_back({{"id", r.id}, {"attach", r.attach}});
  doc["origin"] = spec.origin;
  return doc.dump(2) + "\n";
}

GraphSpec load_graph_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open graph file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph_spec(buffer.str());
}

Graph::Graph(GraphSpec spec) : spec_(std::move(spec)) {
  if (spec_.core_vertices.empty()) throw Error(ErrorCode::kInvalidArgument, "graph has no core vertices");
  for (int i = 0; i < core_size(); ++i) {
    if (!core_index_.emplace(spec_.core_vertices[i], i).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate core vertex '" + spec_.core_vertices[i] + "'");
    }
  }
  auto lookup = [&](const std::string& name) {
    auto it = core_index_.find(name);
    if (it == core_index_.end()) throw Error(ErrorCode::kUnknownVertex, "unknown vertex '" + name + "'");
    return it->second;
  };

  core_incidence_.resize(core_size());
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : spec_.core_edges) {
    int u = lookup(a);
    int v = lookup(b);
    if (u == v) throw Error(ErrorCode::kInvalidArgument, "self-loop at '" + a + "'");
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) {
      throw Error(ErrorCode::kDuplicateEdge, "duplicate edge " + a + "-" + b);
    }
    EdgeAddress e{kCoreRay, static_cast<std::int64_t>(core_edges_.size())};
    core_edges_.push_back({u, v});
    core_incidence_[u].push_back(e);
    core_incidence_[v].push_back(e);
  }

  for (int r = 0; r < static_cast<int>(spec_.rays.size()); ++r) {
    const auto& ray = spec_.rays[r];
    if (ray.id.empty()) throw Error(ErrorCode::kInvalidArgument, "ray with empty id");
    if (!ray_index_.emplace(ray.id, r).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate ray id '" + ray.id + "'");
    }
    int attach = lookup(ray.attach);
    ray_attach_.push_back(attach);
    core_incidence_[attach].push_back({r, 1});
  }

  origin_ = spec_.origin.empty() ? 0 : lookup(spec_.origin);

  core_distance_.assign(core_size(), -1);
  std::deque<int> queue{origin_};
  core_distance_[origin_] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (EdgeAddress e : core_incidence_[u]) {
      if (e.ray != kCoreRay) continue;
      auto [a, b] = core_edges_[e.index];
      int w = a == u ? b : a;
      if (core_distance_[w] < 0) {
        core_distance_[w] = core_distance_[u] + 1;
        queue.push_back(w);
      }
    }
  }
}

bool Graph::contains(VertexAddress v) const {
  if (v.ray == kCoreRay) return v.index >= 0 && v.index < core_size();
  return v.ray >= 0 && v.ray < ray_count() && v.index >= 1;
}

bool Graph::contains(EdgeAddress e) const {
  if (e.ray == kCoreRay) return e.index >= 0 && e.index < core_edge_count();
  return e.ray >= 0 && e.ray < ray_count() && e.index >= 1;
}

std::array<VertexAddress, 2> Graph::endpoints(EdgeAddress e) const {
  if (!contains(e)) throw Error(ErrorCode::kNotFound, "edge address not in graph");
  if (e.ray == kCoreRay) {
    auto [u, v] = core_edges_[e.index];
    return {VertexAddress{kCoreRay, u}, VertexAddress{kCoreRay, v}};
  }
  VertexAddress inner = e.index == 1 ? VertexAddress{kCoreRay, ray_attach_[e.ray]} : VertexAddress{e.ray, e.index - 1};
  return {inner, VertexAddress{e.ray, e.index}};
}

std::vector<EdgeAddress> Graph::incident_edges(VertexAddress v) const {
  if (!contains(v)) throw Error(ErrorCode::kNotFound, "vertex address not in graph");
  if (v.ray == kCoreRay) return core_incidence_[v.index];
  return {EdgeAddress{v.ray, v.index}, EdgeAddress{v.ray, v.index + 1}};
}

int Graph::degree(VertexAddress v) const { return static_cast<int>(incident_edges(v).size()); }

std::int64_t Graph::distance_to_origin(VertexAddress v) const {
  if (!contains(v)) throw Error(ErrorCode::kNotFound, "vertex address not in graph");
  if (v.ray == kCoreRay) return core_distance_[v.index];
  std::int64_t base = core_distance_[ray_attach_[v.ray]];
  return base < 0 ? -1 : base + v.index;
}

bool Graph::is_line() const {
  return core_size() == 1 && ray_count() == 2 && core_edges_.empty();
}

std::string Graph::vertex_name(VertexAddress v) const {
  if (!contains(v)) throw Error(ErrorCode::kNotFound, "vertex address not in graph");
  if (v.ray == kCoreRay) return spec_.core_vertices[v.index];
  return spec_.rays[v.ray].id + ":" + std::to_string(v.index);
}

std::string Graph::edge_name(EdgeAddress e) const {
  if (!contains(e)) throw Error(ErrorCode::kNotFound, "edge address not in graph");
  if (e.ray == kCoreRay) {
    auto [u, v] = core_edges_[e.index];
    return spec_.core_vertices[u] + "-" + spec_.core_vertices[v];
  }
  return spec_.rays[e.ray].id + ":" + std::to_string(e.index - 1) + "-" + std::to_string(e.index);
}

VertexAddress Graph::find_vertex(std::string_view name) const {
  if (auto it = core_index_.find(name); it != core_index_.end()) return {kCoreRay, it->second};
  auto colon = name.rfind(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::kUnknownVertex, "unknown vertex '" + std::string(name) + "'");
  auto ray = ray_index_.find(name.substr(0, colon));
  if (ray == ray_index_.end()) throw Error(ErrorCode::kUnknownVertex, "unknown ray in '" + std::string(name) + "'");
  std::int64_t index = parse_int(name.substr(colon + 1), "ray position");
  if (index < 1) throw Error(ErrorCode::kUnknownVertex, "ray positions start at 1: '" + std::string(name) + "'");
  return {ray->second, index};
}

EdgeAddress Graph::find_edge(std::string_view name) const {
  for (int i = 0; i < core_edge_count(); ++i) {
    if (edge_name({kCoreRay, i}) == name) return {kCoreRay, i};
  }
  auto colon = name.rfind(':');
  auto dash = name.rfind('-');
  if (colon == std::string_view::npos || dash == std::string_view::npos || dash < colon) {
    throw Error(ErrorCode::kNotFound, "unknown edge '" + std::string(name) + "'");
  }
  auto ray = ray_index_.find(name.substr(0, colon));
  if (ray == ray_index_.end()) throw Error(ErrorCode::kNotFound, "unknown ray in '" + std::string(name) + "'");
  std::int64_t lo = parse_int(name.substr(colon + 1, dash - colon - 1), "ray position");
  std::int64_t hi = parse_int(name.substr(dash + 1), "ray position");
  if (lo < 0 || hi != lo + 1) throw Error(ErrorCode::kNotFound, "malformed ray edge '" + std::string(name) + "'");
  return {ray->second, hi};
}

StarLikeGraph build_star_like(const GraphSpec& spec) {
  for (const auto& v : spec.core_vertices) {
    if (v.find(':') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "core vertex names may not contain ':' ('" + v + "')");
    }
  }
  if (spec.origin.empty()) throw Error(ErrorCode::kBadOrigin, "no origin given");
  StarLikeGraph g(spec);
  if (g.ray_count() == 0) throw Error(ErrorCode::kInvalidArgument, "a star-like graph needs at least one ray");
  for (int i = 0; i < g.core_size(); ++i) {
    if (g.distance_to_origin({kCoreRay, i}) < 0) {
      throw Error(ErrorCode::kDisconnectedGraph, "core vertex '" + spec.core_vertices[i] + "' is not connected to the origin");
    }
  }
  if (g.degree(g.origin()) < 2) {
    throw Error(ErrorCode::kBadOrigin, "origin '" + spec.origin + "' has degree " + std::to_string(g.degree(g.origin())));
  }
  return g;
}

FiniteGraph build_finite_graph(const GraphSpec& spec) {
  if (!spec.rays.empty()) throw Error(ErrorCode::kInvalidArgument, "a finite graph cannot have rays; truncate it first");
  return FiniteGraph(spec);
}

FiniteGraph truncate(const StarLikeGraph& g, std::int64_t arm_length) {
  if (arm_length < 0) throw Error(ErrorCode::kInvalidArgument, "arm length must be non-negative");
  GraphSpec out;
  out.core_vertices = g.spec().core_vertices;
  out.core_edges = g.spec().core_edges;
  out.origin = g.spec().origin;
  for (int r = 0; r < g.ray_count(); ++r) {
    std::string previous = g.spec().core_vertices[g.ray_attach(r)];
    for (std::int64_t i = 1; i <= arm_length; ++i) {
      std::string name = g.vertex_name({r, i});
      out.core_vertices.push_back(name);
      out.core_edges.push_back({previous, name});
      previous = name;
    }
  }
  return build_finite_graph(out);
}

LineHypergraph::LineHypergraph(const StarLikeGraph& g) : graph_(g) {}

std::vector<EdgeAddress> LineHypergraph::hyperedge(VertexAddress v) const { return graph_.incident_edges(v); }

int LineHypergraph::hyperedge_size(VertexAddress v) const { return graph_.degree(v); }

std::vector<VertexAddress> LineHypergraph::polygonal_hyperedges() const {
  std::vector<VertexAddress> out;
  for (int i = 0; i < graph_.core_size(); ++i) {
    if (graph_.degree({kCoreRay, i}) > 2) out.push_back({kCoreRay, i});
  }
  return out;
}

std::vector<EdgeAddress> LineHypergraph::sites(std::int64_t radius) const {
  std::vector<EdgeAddress> out;
  for (int i = 0; i < graph_.core_edge_count(); ++i) {
    auto [u, v] = graph_.endpoints({kCoreRay, i});
    if (std::min(graph_.distance_to_origin(u), graph_.distance_to_origin(v)) <= radius) out.push_back({kCoreRay, i});
  }
  for (int r = 0; r < graph_.ray_count(); ++r) {
    std::int64_t base = graph_.distance_to_origin({kCoreRay, graph_.ray_attach(r)});
    for (std::int64_t k = 1; base + k - 1 <= radius; ++k) out.push_back({r, k});
  }
  return out;
}

std::vector<VertexAddress> LineHypergraph::hyperedge_ids(std::int64_t radius) const {
  std::vector<VertexAddress> out;
  for (int i = 0; i < graph_.core_size(); ++i) {
    if (graph_.distance_to_origin({kCoreRay, i}) <= radius) out.push_back({kCoreRay, i});
  }
  for (int r = 0; r < graph_.ray_count(); ++r) {
    std::int64_t base = graph_.distance_to_origin({kCoreRay, graph_.ray_attach(r)});
    for (std::int64_t i = 1; base + i <= radius; ++i) out.push_back({r, i});
  }
  return out;
}

LineHypergraph line_hypergraph(const StarLikeGraph& g) { return LineHypergraph(g); }

}  // namespace fkstar
