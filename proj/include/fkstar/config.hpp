#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fkstar/graph.hpp"
#include "fkstar/region.hpp"

namespace fkstar {

struct Bridge {
  EdgeAddress edge;
  double time = 0.0;
};

struct Death {
  VertexAddress vertex;
  double time = 0.0;
};

using Event = std::variant<Bridge, Death>;

struct LineEvents;

// omega = (B, D): sorted event times per line. Lines without events are not stored.
class Configuration {
 public:
  const std::map<EdgeAddress, std::vector<double>>& bridges() const { return bridges_; }
  const std::map<VertexAddress, std::vector<double>>& deaths() const { return deaths_; }

  std::size_t bridge_count() const;
  std::size_t death_count() const;
  bool empty() const { return bridges_.empty() && deaths_.empty(); }
  bool contains(const Event& e) const;

  // TimestampCollision if the time is already used on the same line or on an
  // incident line (bridge vs death at one of its endpoints).
  void insert(const Graph& g, const Event& e);
  // NotFound if absent.
  void remove(const Event& e);

  // Unchecked: the caller guarantees sorted, collision-free times and no empty lines.
  static Configuration from_maps(std::map<EdgeAddress, std::vector<double>> bridges,
                                 std::map<VertexAddress, std::vector<double>> deaths);

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  friend Configuration to_configuration(const LineEvents& ev, const Region& r);

  std::map<EdgeAddress, std::vector<double>> bridges_;
  std::map<VertexAddress, std::vector<double>> deaths_;
};

Configuration insert_event(Configuration c, const Graph& g, const Event& e);
Configuration remove_event(Configuration c, const Event& e);

// Free embedding: keeps the events on the region's lines inside their windows.
Configuration restrict(const Configuration& c, const Region& r);

// Events indexed by region line, the working representation of the samplers.
struct LineEvents {
  std::vector<std::vector<double>> deaths;   // per vertex line
  std::vector<std::vector<double>> bridges;  // per edge line

  explicit LineEvents(const Region& r) : deaths(r.vertex_line_count()), bridges(r.edge_line_count()) {}
  LineEvents() = default;

  std::size_t death_count() const;
  std::size_t bridge_count() const;
  friend bool operator==(const LineEvents&, const LineEvents&) = default;
};

// Periodic windows are half-open, [lo, hi).
bool in_window(const Region& r, const Window& w, double t);

LineEvents to_line_events(const Configuration& c, const Region& r);
Configuration to_configuration(const LineEvents& ev, const Region& r);

// Snapshot: {"deaths": [{"vertex", "times"}], "bridges": [{"edge", "times"}]},
// vertices then edges, each in address order.
std::string serialize_configuration(const Configuration& c, const Graph& g);
Configuration parse_configuration(std::string_view json_text, const Graph& g);

}  // namespace fkstar
