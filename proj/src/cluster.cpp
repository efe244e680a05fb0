#include "fkstar/cluster.hpp"

#include <algorithm>

namespace fkstar {

int ClusterLabeling::add_line(const Window& window, std::span<const double> cuts, bool side, std::optional<Window> hole) {
  Line line;
  line.window = window;
  line.side = side;
  line.first = segment_count();
  line.cut_offset = static_cast<int>(cuts_.size());
  if (!hole) {
    cuts_.insert(cuts_.end(), cuts.begin(), cuts.end());
  } else {
    // The hole's ends become cuts; the segment between them is excluded.
    for (double t : cuts) {
      if (t < hole->lo || t > hole->hi) cuts_.push_back(t);
    }
    auto mid = std::upper_bound(cuts_.begin() + line.cut_offset, cuts_.end(), hole->lo);
    mid = cuts_.insert(mid, hole->lo);
    cuts_.insert(mid + 1, hole->hi);
  }
  line.cut_count = static_cast<int>(cuts_.size()) - line.cut_offset;
  line.count = periodic_ ? std::max(line.cut_count, 1) : line.cut_count + 1;
  lines_.push_back(line);
  excluded_.resize(excluded_.size() + line.count, 0);
  if (hole) {
    auto begin = cuts_.begin() + line.cut_offset;
    int k = static_cast<int>(std::lower_bound(begin, cuts_.end(), hole->lo) - begin);
    excluded_[line.first + (k + 1) % line.count] = 1;
  }
  parent_.clear();
  super_attached_ = false;
  boundary_valid_ = false;
  return line_count() - 1;
}

void ClusterLabeling::reset_dsu() const {
  parent_.resize(excluded_.size() + 1);
  size_.assign(parent_.size(), 1);
  for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = static_cast<int>(i);
}

std::span<const double> ClusterLabeling::cuts(int line) const {
  const Line& l = lines_[line];
  return {cuts_.data() + l.cut_offset, static_cast<std::size_t>(l.cut_count)};
}

std::optional<int> ClusterLabeling::try_segment_at(int line, double t) const {
  const Line& l = lines_[line];
  if (!l.window.contains(t)) return std::nullopt;
  auto begin = cuts_.begin() + l.cut_offset;
  auto end = begin + l.cut_count;
  auto it = std::upper_bound(begin, end, t);
  if (it != begin && *(it - 1) == t) return std::nullopt;
  int k = static_cast<int>(it - begin);
  if (periodic_ && k == l.cut_count) k = 0;
  int seg = l.first + k;
  if (excluded_[seg]) return std::nullopt;
  return seg;
}

void ClusterLabeling::segments_at(int line, std::span<const double> sorted_times, std::vector<int>& out) const {
  const Line& l = lines_[line];
  const double* c = cuts_.data() + l.cut_offset;
  int m = l.cut_count, k = 0;
  out.resize(sorted_times.size());
  for (std::size_t i = 0; i < sorted_times.size(); ++i) {
    double t = sorted_times[i];
    while (k < m && c[k] < t) ++k;
    if (!l.window.contains(t) || (k < m && c[k] == t)) {
      out[i] = -1;
      continue;
    }
    int seg = l.first + ((periodic_ && k == m) ? 0 : k);
    out[i] = excluded_[seg] ? -1 : seg;
  }
}

int ClusterLabeling::segment_at(int line, double t) const {
  if (line < 0 || line >= line_count()) throw Error(ErrorCode::kPointOutsideRegion, "line not in region");
  const Line& l = lines_[line];
  if (!l.window.contains(t)) throw Error(ErrorCode::kPointOutsideRegion, "time outside the line window");
  auto c = cuts(line);
  if (std::binary_search(c.begin(), c.end(), t)) throw Error(ErrorCode::kQueryAtDeath, "query point is a cut point");
  auto seg = try_segment_at(line, t);
  if (!seg) throw Error(ErrorCode::kPointOutsideRegion, "query point lies in an excluded part of the line");
  return *seg;
}

int ClusterLabeling::find(int x) const {
  ensure_dsu();
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void ClusterLabeling::link(int a, int b) {
  ensure_dsu();
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  boundary_valid_ = false;
}

void ClusterLabeling::link_points(int line_a, int line_b, double t) {
  auto a = try_segment_at(line_a, t);
  auto b = try_segment_at(line_b, t);
  if (a && b) link(*a, *b);
}

void ClusterLabeling::link_hyper(std::span<const int> lines, double t) {
  int anchor = -1;
  for (int line : lines) {
    auto seg = try_segment_at(line, t);
    if (!seg) continue;
    if (anchor < 0) {
      anchor = *seg;
    } else {
      link(anchor, *seg);
    }
  }
}

void ClusterLabeling::link_to_supernode(int segment) {
  super_attached_ = true;
  link(segment, supernode());
  boundary_valid_ = false;
}

void ClusterLabeling::attach_window_ends() {
  if (periodic_) return;
  for (const Line& l : lines_) {
    if (!excluded_[l.first]) link_to_supernode(l.first);
    if (!excluded_[l.first + l.count - 1]) link_to_supernode(l.first + l.count - 1);
  }
}

void ClusterLabeling::attach_whole_line(int line) {
  const Line& l = lines_[line];
  for (int s = l.first; s < l.first + l.count; ++s) {
    if (!excluded_[s]) link_to_supernode(s);
  }
}

int ClusterLabeling::components() const {
  int k = 0;
  for (int s = 0; s < segment_count(); ++s) {
    if (!excluded_[s] && find(s) == s) ++k;
  }
  if (super_attached_ && find(supernode()) == supernode()) ++k;
  return k;
}

void ClusterLabeling::mark_boundary() const {
  ensure_dsu();
  boundary_root_.assign(parent_.size(), 0);
  if (super_attached_) boundary_root_[find(supernode())] = 1;
  for (const Line& l : lines_) {
    if (l.side) {
      for (int s = l.first; s < l.first + l.count; ++s) {
        if (!excluded_[s]) boundary_root_[find(s)] = 1;
      }
    } else if (!periodic_) {
      if (!excluded_[l.first]) boundary_root_[find(l.first)] = 1;
      if (!excluded_[l.first + l.count - 1]) boundary_root_[find(l.first + l.count - 1)] = 1;
    }
  }
  boundary_valid_ = true;
}

bool ClusterLabeling::reaches_boundary(int segment) const {
  if (!boundary_valid_) mark_boundary();
  return boundary_root_[find(segment)] != 0;
}

ClusterLabeling label_clusters(const Region& r, const LineEvents& ev) {
  ClusterLabeling labeling(r.periodic());
  for (int i = 0; i < r.vertex_line_count(); ++i) {
    const auto& line = r.vertex_lines()[i];
    labeling.add_line(line.window, ev.deaths[i], line.side);
  }
  bool wired = r.bc() == Boundary::kWired;
  std::vector<int> a, b;
  for (int j = 0; j < r.edge_line_count(); ++j) {
    const auto& line = r.edge_lines()[j];
    if (!line.dangling()) {
      labeling.segments_at(line.ends[0], ev.bridges[j], a);
      labeling.segments_at(line.ends[1], ev.bridges[j], b);
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] >= 0 && b[k] >= 0) labeling.link(a[k], b[k]);
      }
    } else if (wired) {
      labeling.segments_at(line.inside_end(), ev.bridges[j], a);
      for (int seg : a) {
        if (seg >= 0) labeling.link_to_supernode(seg);
      }
    }
  }
  if (wired) labeling.attach_window_ends();
  return labeling;
}

int segment_of(const Region& r, const ClusterLabeling& labeling, const SpacePoint& p) {
  auto line = r.find_vertex_line(p.vertex);
  if (!line) throw Error(ErrorCode::kPointOutsideRegion, "vertex not in region");
  return labeling.segment_at(*line, p.time);
}

std::pair<int, ClusterLabeling> count_clusters(const Configuration& c, const Region& r) {
  ClusterLabeling labeling = label_clusters(r, to_line_events(c, r));
  int k = labeling.components();
  return {k, std::move(labeling)};
}

bool connected(const Configuration& c, const Region& r, const SpacePoint& p, const SpacePoint& q) {
  ClusterLabeling labeling = label_clusters(r, to_line_events(c, r));
  return labeling.connected(segment_of(r, labeling, p), segment_of(r, labeling, q));
}

bool connected_to_boundary(const Configuration& c, const Region& r, const SpacePoint& p) {
  ClusterLabeling labeling = label_clusters(r, to_line_events(c, r));
  return labeling.reaches_boundary(segment_of(r, labeling, p));
}

}  // namespace fkstar
