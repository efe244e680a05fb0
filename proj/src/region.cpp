#include "fkstar/region.hpp"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

namespace fkstar {

const char* to_string(Boundary bc) {
  switch (bc) {
    case Boundary::kFree: return "free";
    case Boundary::kWired: return "wired";
    case Boundary::kPeriodic: return "periodic";
  }
  return "?";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "free" || text == "0") return Boundary::kFree;
  if (text == "wired" || text == "1") return Boundary::kWired;
  if (text == "periodic") return Boundary::kPeriodic;
  throw Error(ErrorCode::kInvalidArgument, "unknown boundary condition '" + std::string(text) + "'");
}

Region::Region(RegionKind kind, Boundary bc, std::int64_t n, std::string label, std::vector<VertexLine> vertex_lines,
               std::vector<EdgeLine> edge_lines, std::vector<std::int64_t> coordinates)
    : kind_(kind),
      bc_(bc),
      n_(n),
      label_(std::move(label)),
      vertex_lines_(std::move(vertex_lines)),
      edge_lines_(std::move(edge_lines)),
      coordinates_(std::move(coordinates)) {
  if (!coordinates_.empty() && coordinates_.size() != vertex_lines_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "coordinate table does not match the vertex lines");
  }
  for (int i = 0; i < vertex_line_count(); ++i) {
    auto& line = vertex_lines_[i];
    if (!(line.window.hi > line.window.lo)) throw Error(ErrorCode::kInvalidArgument, "empty vertex-line window");
    if (!vertex_index_.emplace(line.vertex, i).second) throw Error(ErrorCode::kInvalidArgument, "repeated vertex line");
    line.edges.clear();
    vertex_length_ += line.window.length();
  }
  for (int j = 0; j < edge_line_count(); ++j) {
    const auto& line = edge_lines_[j];
    if (!(line.window.hi > line.window.lo)) throw Error(ErrorCode::kInvalidArgument, "empty edge-line window");
    if (!edge_index_.emplace(line.edge, j).second) throw Error(ErrorCode::kInvalidArgument, "repeated edge line");
    if (line.ends[0] == kOutside && line.ends[1] == kOutside) {
      throw Error(ErrorCode::kInvalidArgument, "edge line with no endpoint in the region");
    }
    for (int end : line.ends) {
      if (end == kOutside) continue;
      if (end < 0 || end >= vertex_line_count()) throw Error(ErrorCode::kInvalidArgument, "edge end out of range");
      vertex_lines_[end].edges.push_back(j);
    }
    edge_length_ += line.window.length();
  }
  for (int i = 0; i < static_cast<int>(coordinates_.size()); ++i) coordinate_index_.emplace(coordinates_[i], i);
  if (bc_ == Boundary::kPeriodic) {
    for (const auto& line : vertex_lines_) {
      if (!(line.window == vertex_lines_.front().window)) {
        throw Error(ErrorCode::kInvalidArgument, "periodic closure needs a common time window");
      }
    }
  }
}

std::optional<int> Region::find_vertex_line(VertexAddress v) const {
  auto it = vertex_index_.find(v);
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Region::find_edge_line(EdgeAddress e) const {
  auto it = edge_index_.find(e);
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Region::line_at(std::int64_t a) const {
  auto it = coordinate_index_.find(a);
  if (it == coordinate_index_.end()) return std::nullopt;
  return it->second;
}

Region Region::with_boundary(Boundary bc) const {
  return Region(kind_, bc, n_, label_, vertex_lines_, edge_lines_, coordinates_);
}

VertexAddress line_vertex(std::int64_t a) {
  if (a == 0) return {kCoreRay, 0};
  if (a > 0) return {0, a};
  return {1, -a};
}

EdgeAddress line_edge(std::int64_t a) {
  if (a >= 0) return {0, a + 1};
  return {1, -a};
}

std::int64_t line_coordinate(VertexAddress v) {
  if (v.ray == kCoreRay) return 0;
  return v.ray == 0 ? v.index : -v.index;
}

std::int64_t line_edge_coordinate(EdgeAddress e) { return e.ray == 0 ? e.index - 1 : -e.index; }

namespace {

void require_line(const StarLikeGraph& g, const char* kind) {
  if (!g.is_line()) {
    throw Error(ErrorCode::kKindMismatch,
                std::string(kind) + " regions need the line graph Z (origin alone in the core with two rays)");
  }
}

struct PlanarLayout {
  RegionKind kind;
  std::int64_t n;
  std::string label;
  std::int64_t a_lo;
  std::int64_t a_hi;
  bool half_line;  // Z+: no edge to the left of a = 0
  std::function<Window(std::int64_t)> window;
  std::function<bool(std::int64_t)> side;
};

Region planar_region(const PlanarLayout& layout, Boundary bc) {
  if (layout.a_hi < layout.a_lo) throw Error(ErrorCode::kInvalidArgument, "empty coordinate range");
  if (layout.half_line && layout.a_lo < 0) throw Error(ErrorCode::kInvalidArgument, "half-plane region reaches a < 0");

  // Vertex lines in address order: the origin, ray 0 outward, ray 1 outward.
  std::vector<std::int64_t> coords;
  for (std::int64_t a = layout.a_lo; a <= layout.a_hi; ++a) coords.push_back(a);
  std::sort(coords.begin(), coords.end(),
            [](std::int64_t x, std::int64_t y) { return line_vertex(x) < line_vertex(y); });

  std::vector<VertexLine> vertex_lines;
  std::map<std::int64_t, int> index;
  for (std::int64_t a : coords) {
    index[a] = static_cast<int>(vertex_lines.size());
    vertex_lines.push_back({line_vertex(a), layout.window(a), layout.side(a), {}});
  }

  std::vector<std::int64_t> edge_coords;
  std::int64_t first = (layout.half_line && layout.a_lo == 0) ? 0 : layout.a_lo - 1;
  for (std::int64_t a = first; a <= layout.a_hi; ++a) edge_coords.push_back(a);
  std::sort(edge_coords.begin(), edge_coords.end(),
            [](std::int64_t x, std::int64_t y) { return line_edge(x) < line_edge(y); });

  std::vector<EdgeLine> edge_lines;
  for (std::int64_t a : edge_coords) {
    EdgeLine line;
    line.edge = line_edge(a);
    // Endpoint order follows Graph::endpoints: inner vertex first.
    std::int64_t inner = a >= 0 ? a : a + 1;
    std::int64_t outer = a >= 0 ? a + 1 : a;
    auto lookup = [&](std::int64_t x) { return index.count(x) ? index[x] : kOutside; };
    line.ends = {lookup(inner), lookup(outer)};
    if (line.ends[0] != kOutside && line.ends[1] != kOutside) {
      Window w0 = vertex_lines[line.ends[0]].window;
      Window w1 = vertex_lines[line.ends[1]].window;
      line.window = {std::max(w0.lo, w1.lo), std::min(w0.hi, w1.hi)};
    } else {
      line.window = vertex_lines[line.inside_end()].window;
    }
    if (!(line.window.hi > line.window.lo)) continue;
    edge_lines.push_back(line);
  }

  std::vector<std::int64_t> coordinates;
  coordinates.reserve(coords.size());
  for (const auto& line : vertex_lines) coordinates.push_back(line_coordinate(line.vertex));
  return Region(layout.kind, bc, layout.n, layout.label, std::move(vertex_lines), std::move(edge_lines),
                std::move(coordinates));
}

}  // namespace

Region lambda_region(const StarLikeGraph& g, std::int64_t n, Boundary bc, std::optional<double> half_height) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "lambda(n) needs n >= 0");
  double h = half_height.value_or(static_cast<double>(n));
  if (!(h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda(n) needs a positive time half-height");
  Window window{-h, h};

  std::vector<VertexLine> vertex_lines;
  for (int i = 0; i < g.core_size(); ++i) {
    VertexAddress v{kCoreRay, i};
    std::int64_t d = g.distance_to_origin(v);
    if (d <= n) vertex_lines.push_back({v, window, d == n, {}});
  }
  for (int r = 0; r < g.ray_count(); ++r) {
    std::int64_t base = g.distance_to_origin({kCoreRay, g.ray_attach(r)});
    for (std::int64_t i = 1; base + i <= n; ++i) vertex_lines.push_back({{r, i}, window, base + i == n, {}});
  }
  std::map<VertexAddress, int> index;
  for (int i = 0; i < static_cast<int>(vertex_lines.size()); ++i) index[vertex_lines[i].vertex] = i;

  std::vector<EdgeLine> edge_lines;
  auto add_edge = [&](EdgeAddress e) {
    auto ends = g.endpoints(e);
    EdgeLine line;
    line.edge = e;
    for (int k = 0; k < 2; ++k) line.ends[k] = index.count(ends[k]) ? index[ends[k]] : kOutside;
    line.window = window;
    if (line.ends[0] != kOutside || line.ends[1] != kOutside) edge_lines.push_back(line);
  };
  for (int i = 0; i < g.core_edge_count(); ++i) add_edge({kCoreRay, i});
  for (int r = 0; r < g.ray_count(); ++r) {
    std::int64_t base = g.distance_to_origin({kCoreRay, g.ray_attach(r)});
    for (std::int64_t k = 1; base + k - 1 <= n; ++k) add_edge({r, k});
  }

  std::vector<std::int64_t> coordinates;
  if (g.is_line()) {
    for (const auto& line : vertex_lines) coordinates.push_back(line_coordinate(line.vertex));
  }
  std::string label = half_height ? fmt::format("lambda:{}:{}", n, h) : fmt::format("lambda:{}", n);
  return Region(RegionKind::kLambda, bc, n, label, std::move(vertex_lines), std::move(edge_lines),
                std::move(coordinates));
}

Region box_region(const StarLikeGraph& g, std::int64_t n, std::int64_t m, double s, Boundary bc) {
  require_line(g, "box");
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "box S_n needs n >= 1");
  double h = static_cast<double>(n);
  return planar_region({RegionKind::kBox, n, fmt::format("box:{}:{}:{}", n, m, s), m - n, m + n, false,
                        [=](std::int64_t) { return Window{s - h, s + h}; },
                        [=](std::int64_t a) { return a == m - n || a == m + n; }},
                       bc);
}

Region half_box_region(const StarLikeGraph& g, std::int64_t n, Boundary bc) {
  require_line(g, "half-box");
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "half-box T_n needs n >= 1");
  double h = static_cast<double>(n);
  return planar_region({RegionKind::kHalfBox, n, fmt::format("halfbox:{}", n), 0, 2 * n, true,
                        [=](std::int64_t) { return Window{-h, h}; },
                        [=](std::int64_t a) { return a == 0 || a == 2 * n; }},
                       bc);
}

Region wedge_region(const StarLikeGraph& g, std::int64_t a_max, Boundary bc) {
  require_line(g, "wedge");
  if (a_max < 1) throw Error(ErrorCode::kInvalidArgument, "wedge needs a_max >= 1");
  if (bc == Boundary::kPeriodic) throw Error(ErrorCode::kInvalidArgument, "the wedge has no periodic closure");
  return planar_region({RegionKind::kWedge, a_max, fmt::format("wedge:{}", a_max), 0, a_max, true,
                        [](std::int64_t a) { return Window{0.0, static_cast<double>(a) / 2.0 + 1.0}; },
                        [=](std::int64_t a) { return a == a_max; }},
                       bc);
}

Region strip_region(const StarLikeGraph& g, std::int64_t n, std::int64_t a_max, Boundary bc) {
  require_line(g, "strip");
  if (n < 0 || a_max < 1) throw Error(ErrorCode::kInvalidArgument, "strip needs n >= 0 and a_max >= 1");
  double h = static_cast<double>(2 * n + 1);
  return planar_region({RegionKind::kStrip, n, fmt::format("strip:{}:{}", n, a_max), 0, a_max, true,
                        [=](std::int64_t) { return Window{-h, h}; },
                        [=](std::int64_t a) { return a == 0 || a == a_max; }},
                       bc);
}

Region rectangle_region(const StarLikeGraph& g, std::int64_t a_lo, std::int64_t a_hi, double t_lo, double t_hi,
                        Boundary bc) {
  require_line(g, "rectangle");
  if (!(t_hi > t_lo)) throw Error(ErrorCode::kInvalidArgument, "rectangle needs t_hi > t_lo");
  return planar_region({RegionKind::kRectangle, a_hi - a_lo, fmt::format("rect:{}:{}:{}:{}", a_lo, a_hi, t_lo, t_hi),
                        a_lo, a_hi, false, [=](std::int64_t) { return Window{t_lo, t_hi}; },
                        [=](std::int64_t a) { return a == a_lo || a == a_hi; }},
                       bc);
}

Region finite_region(const FiniteGraph& g, double height, Boundary bc) {
  if (!(height > 0.0)) throw Error(ErrorCode::kInvalidArgument, "finite region needs a positive height");
  Window window{0.0, height};
  std::vector<VertexLine> vertex_lines;
  for (int i = 0; i < g.vertex_count(); ++i) vertex_lines.push_back({{kCoreRay, i}, window, false, {}});
  std::vector<EdgeLine> edge_lines;
  for (int j = 0; j < static_cast<int>(g.edges().size()); ++j) {
    edge_lines.push_back({{kCoreRay, j}, {g.edges()[j][0], g.edges()[j][1]}, window});
  }
  return Region(RegionKind::kFinite, bc, 0, fmt::format("finite:{}", height), std::move(vertex_lines),
                std::move(edge_lines), {});
}

Region make_region(const StarLikeGraph& g, const RegionSpec& spec, Boundary bc) {
  switch (spec.kind) {
    case RegionKind::kLambda: return lambda_region(g, spec.n, bc, spec.half_height);
    case RegionKind::kBox: return box_region(g, spec.n, spec.shift, spec.time_shift, bc);
    case RegionKind::kHalfBox: return half_box_region(g, spec.n, bc);
    case RegionKind::kWedge: return wedge_region(g, spec.a_max, bc);
    case RegionKind::kStrip: return strip_region(g, spec.n, spec.a_max, bc);
    case RegionKind::kRectangle: return rectangle_region(g, spec.a_lo, spec.a_hi, spec.t_lo, spec.t_hi, bc);
    case RegionKind::kFinite:
      throw Error(ErrorCode::kKindMismatch, "finite regions are built from a FiniteGraph");
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown region kind");
}

}  // namespace fkstar
