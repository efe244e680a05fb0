#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fkstar/config.hpp"
#include "fkstar/region.hpp"

namespace fkstar {

// Union-find over the open, cut-free intervals ("segments") of a family of
// vertical lines, plus one boundary supernode. The primal labeling uses the
// region's vertex lines with deaths as cuts; the dual labeling (duality.hpp)
// uses edge lines with bridges as cuts.
class ClusterLabeling {
 public:
  explicit ClusterLabeling(bool periodic = false) : periodic_(periodic) {}

  // Adds a line (all lines go in before any linking); `cuts` must be sorted and inside the window. Points of the
  // optional hole belong to no segment and are never linked.
  int add_line(const Window& window, std::span<const double> cuts, bool side, std::optional<Window> hole = std::nullopt);

  bool periodic() const { return periodic_; }
  int line_count() const { return static_cast<int>(lines_.size()); }
  int segment_count() const { return static_cast<int>(excluded_.size()); }
  int supernode() const { return segment_count(); }
  int first_segment(int line) const { return lines_[line].first; }
  int line_segment_count(int line) const { return lines_[line].count; }
  std::span<const double> cuts(int line) const;
  const Window& window(int line) const { return lines_[line].window; }

  // Throws PointOutsideRegion (outside the window or inside a hole) or
  // QueryAtDeath (exactly at a cut).
  int segment_at(int line, double t) const;
  std::optional<int> try_segment_at(int line, double t) const;
  // try_segment_at for a sorted run of times by one merge pass; -1 where it
  // would return nothing.
  void segments_at(int line, std::span<const double> sorted_times, std::vector<int>& out) const;

  void link(int a, int b);
  // Joins the segments of two lines at time t; no-op if either point is not in a segment.
  void link_points(int line_a, int line_b, double t);
  void link_hyper(std::span<const int> lines, double t);
  void link_to_supernode(int segment);
  void attach_window_ends();
  void attach_whole_line(int line);

  int find(int x) const;
  bool connected(int a, int b) const { return find(a) == find(b); }
  bool supernode_attached() const { return super_attached_; }

  // Number of components; the supernode counts only once it is attached.
  int components() const;

  // The boundary set: the supernode, segments touching a window end (unless
  // periodic), and every segment of a side line.
  bool reaches_boundary(int segment) const;

 private:
  struct Line {
    Window window;
    int first = 0;
    int count = 0;
    int cut_offset = 0;
    int cut_count = 0;
    bool side = false;
  };

  void mark_boundary() const;
  void ensure_dsu() const {
    if (parent_.size() != excluded_.size() + 1) reset_dsu();
  }
  void reset_dsu() const;

  bool periodic_;
  std::vector<Line> lines_;
  std::vector<double> cuts_;
  std::vector<char> excluded_;
  mutable std::vector<int> parent_;
  mutable std::vector<int> size_;
  bool super_attached_ = false;
  mutable std::vector<char> boundary_root_;
  mutable bool boundary_valid_ = false;
};

// The primal labeling of a region: vertex lines cut by deaths, bridges as links,
// wired closure through the supernode (window ends and protruding bridges).
ClusterLabeling label_clusters(const Region& r, const LineEvents& ev);

struct SpacePoint {
  VertexAddress vertex;
  double time = 0.0;
};

// Segment of a point of the region (PointOutsideRegion, QueryAtDeath).
int segment_of(const Region& r, const ClusterLabeling& labeling, const SpacePoint& p);

// Restricts c to r first.
std::pair<int, ClusterLabeling> count_clusters(const Configuration& c, const Region& r);
bool connected(const Configuration& c, const Region& r, const SpacePoint& p, const SpacePoint& q);
bool connected_to_boundary(const Configuration& c, const Region& r, const SpacePoint& p);

}  // namespace fkstar
