#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fkstar/graph.hpp"

namespace fkstar {

enum class Boundary { kFree, kWired, kPeriodic };

const char* to_string(Boundary bc);
Boundary parse_boundary(std::string_view text);

enum class RegionKind {
  kLambda,     // Lambda_n: distance <= n from the origin, |t| <= n
  kBox,        // S_n(m, s) on Z
  kHalfBox,    // T_n = S_n(n, 0) on Z+
  kWedge,      // {0 <= t <= a/2 + 1}, truncated at a_max, on Z+
  kStrip,      // {a >= 0, |t| <= 2n + 1}, truncated at a_max, on Z+
  kRectangle,  // [a_lo, a_hi] x [t_lo, t_hi] on Z
  kFinite,     // every vertex of a finite graph over [0, height]
};

inline constexpr int kOutside = -1;

struct Window {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return lo <= t && t <= hi; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct VertexLine {
  VertexAddress vertex;
  Window window;
  bool side = false;       // the whole line belongs to the region boundary
  std::vector<int> edges;  // incident edge-line indices
};

struct EdgeLine {
  EdgeAddress edge;
  std::array<int, 2> ends{kOutside, kOutside};  // vertex-line indices, kOutside when the endpoint is not in the region
  Window window;

  bool dangling() const { return ends[0] == kOutside || ends[1] == kOutside; }
  int inside_end() const { return ends[0] == kOutside ? ends[1] : ends[0]; }
};

// A finite space-time window: vertex lines and edge lines with their time
// windows, plus the boundary closure. Immutable after construction.
class Region {
 public:
  Region(RegionKind kind, Boundary bc, std::int64_t n, std::string label, std::vector<VertexLine> vertex_lines,
         std::vector<EdgeLine> edge_lines, std::vector<std::int64_t> coordinates);

  RegionKind kind() const { return kind_; }
  Boundary bc() const { return bc_; }
  bool periodic() const { return bc_ == Boundary::kPeriodic; }
  std::int64_t n() const { return n_; }
  const std::string& label() const { return label_; }

  const std::vector<VertexLine>& vertex_lines() const { return vertex_lines_; }
  const std::vector<EdgeLine>& edge_lines() const { return edge_lines_; }
  int vertex_line_count() const { return static_cast<int>(vertex_lines_.size()); }
  int edge_line_count() const { return static_cast<int>(edge_lines_.size()); }
  int line_count() const { return vertex_line_count() + edge_line_count(); }

  std::optional<int> find_vertex_line(VertexAddress v) const;
  std::optional<int> find_edge_line(EdgeAddress e) const;

  // Total lengths of the vertex lines (L_D) and edge lines (L_B).
  double vertex_length() const { return vertex_length_; }
  double edge_length() const { return edge_length_; }

  // Z-coordinates, available when the region lives on the line graph Z.
  bool has_coordinates() const { return !coordinates_.empty(); }
  std::int64_t coordinate(int vertex_line) const { return coordinates_.at(vertex_line); }
  std::optional<int> line_at(std::int64_t a) const;

  // Same lines, different closure. Periodic closure requires equal windows.
  Region with_boundary(Boundary bc) const;

 private:
  RegionKind kind_;
  Boundary bc_;
  std::int64_t n_;
  std::string label_;
  std::vector<VertexLine> vertex_lines_;
  std::vector<EdgeLine> edge_lines_;
  std::vector<std::int64_t> coordinates_;
  std::map<VertexAddress, int> vertex_index_;
  std::map<EdgeAddress, int> edge_index_;
  std::map<std::int64_t, int> coordinate_index_;
  double vertex_length_ = 0.0;
  double edge_length_ = 0.0;
};

struct RegionSpec {
  RegionKind kind = RegionKind::kLambda;
  std::int64_t n = 1;
  std::int64_t shift = 0;       // box: m
  double time_shift = 0.0;      // box: s
  std::int64_t a_max = 0;       // wedge, strip
  std::int64_t a_lo = 0, a_hi = 0;
  double t_lo = 0.0, t_hi = 0.0;
  std::optional<double> half_height;  // lambda: time window [-h, h], default h = n
};

// Errors: KindMismatch (half-plane or box kinds on a graph that is not Z),
// InvalidArgument (bad sizes, periodic closure of a wedge).
Region make_region(const StarLikeGraph& g, const RegionSpec& spec, Boundary bc);

Region lambda_region(const StarLikeGraph& g, std::int64_t n, Boundary bc,
                     std::optional<double> half_height = std::nullopt);
Region box_region(const StarLikeGraph& g, std::int64_t n, std::int64_t m, double s, Boundary bc);
Region half_box_region(const StarLikeGraph& g, std::int64_t n, Boundary bc);
Region wedge_region(const StarLikeGraph& g, std::int64_t a_max, Boundary bc);
Region strip_region(const StarLikeGraph& g, std::int64_t n, std::int64_t a_max, Boundary bc);
Region rectangle_region(const StarLikeGraph& g, std::int64_t a_lo, std::int64_t a_hi, double t_lo, double t_hi,
                        Boundary bc);
Region finite_region(const FiniteGraph& g, double height, Boundary bc);

// Z coordinate helpers for the line graph (ray 0 is the positive direction).
VertexAddress line_vertex(std::int64_t a);
EdgeAddress line_edge(std::int64_t a);  // edge between a and a + 1
std::int64_t line_coordinate(VertexAddress v);
std::int64_t line_edge_coordinate(EdgeAddress e);  // a for the edge (a, a + 1)

}  // namespace fkstar
