#include "fkstar/config.hpp"

#include <algorithm>

#include "json.hpp"

namespace fkstar {

namespace {

bool has_time(const std::vector<double>& times, double t) {
  return std::binary_search(times.begin(), times.end(), t);
}

template <class Map, class Key>
bool line_has(const Map& m, const Key& k, double t) {
  auto it = m.find(k);
  return it != m.end() && has_time(it->second, t);
}

void insert_sorted(std::vector<double>& times, double t) { times.insert(std::upper_bound(times.begin(), times.end(), t), t); }

template <class Map, class Key>
void erase_time(Map& m, const Key& k, double t) {
  auto it = m.find(k);
  if (it == m.end()) throw Error(ErrorCode::kNotFound, "no such event");
  auto pos = std::lower_bound(it->second.begin(), it->second.end(), t);
  if (pos == it->second.end() || *pos != t) throw Error(ErrorCode::kNotFound, "no such event");
  it->second.erase(pos);
  if (it->second.empty()) m.erase(it);
}

}  // namespace

std::size_t Configuration::bridge_count() const {
  std::size_t n = 0;
  for (const auto& [e, times] : bridges_) n += times.size();
  return n;
}

std::size_t Configuration::death_count() const {
  std::size_t n = 0;
  for (const auto& [v, times] : deaths_) n += times.size();
  return n;
}

bool Configuration::contains(const Event& e) const {
  if (const auto* b = std::get_if<Bridge>(&e)) return line_has(bridges_, b->edge, b->time);
  const auto& d = std::get<Death>(e);
  return line_has(deaths_, d.vertex, d.time);
}

void Configuration::insert(const Graph& g, const Event& e) {
  if (const auto* b = std::get_if<Bridge>(&e)) {
    if (!g.contains(b->edge)) throw Error(ErrorCode::kNotFound, "bridge on an edge not in the graph");
    bool clash = line_has(bridges_, b->edge, b->time);
    for (const auto& v : g.endpoints(b->edge)) clash = clash || line_has(deaths_, v, b->time);
    if (clash) throw Error(ErrorCode::kTimestampCollision, "bridge time collides with an event on " + g.edge_name(b->edge));
    insert_sorted(bridges_[b->edge], b->time);
    return;
  }
  const auto& d = std::get<Death>(e);
  if (!g.contains(d.vertex)) throw Error(ErrorCode::kNotFound, "death on a vertex not in the graph");
  bool clash = line_has(deaths_, d.vertex, d.time);
  for (const auto& edge : g.incident_edges(d.vertex)) clash = clash || line_has(bridges_, edge, d.time);
  if (clash) throw Error(ErrorCode::kTimestampCollision, "death time collides with an event at " + g.vertex_name(d.vertex));
  insert_sorted(deaths_[d.vertex], d.time);
}

void Configuration::remove(const Event& e) {
  if (const auto* b = std::get_if<Bridge>(&e)) {
    erase_time(bridges_, b->edge, b->time);
  } else {
    const auto& d = std::get<Death>(e);
    erase_time(deaths_, d.vertex, d.time);
  }
}

Configuration Configuration::from_maps(std::map<EdgeAddress, std::vector<double>> bridges,
                                       std::map<VertexAddress, std::vector<double>> deaths) {
  Configuration c;
  c.bridges_ = std::move(bridges);
  c.deaths_ = std::move(deaths);
  return c;
}

Configuration insert_event(Configuration c, const Graph& g, const Event& e) {
  c.insert(g, e);
  return c;
}

Configuration remove_event(Configuration c, const Event& e) {
  c.remove(e);
  return c;
}

bool in_window(const Region& r, const Window& w, double t) {
  if (r.periodic()) return w.lo <= t && t < w.hi;
  return w.contains(t);
}

std::size_t LineEvents::death_count() const {
  std::size_t n = 0;
  for (const auto& times : deaths) n += times.size();
  return n;
}

std::size_t LineEvents::bridge_count() const {
  std::size_t n = 0;
  for (const auto& times : bridges) n += times.size();
  return n;
}

LineEvents to_line_events(const Configuration& c, const Region& r) {
  LineEvents ev(r);
  for (const auto& [v, times] : c.deaths()) {
    auto line = r.find_vertex_line(v);
    if (!line) continue;
    const Window& w = r.vertex_lines()[*line].window;
    for (double t : times) {
      if (in_window(r, w, t)) ev.deaths[*line].push_back(t);
    }
  }
  for (const auto& [e, times] : c.bridges()) {
    auto line = r.find_edge_line(e);
    if (!line) continue;
    const Window& w = r.edge_lines()[*line].window;
    for (double t : times) {
      if (in_window(r, w, t)) ev.bridges[*line].push_back(t);
    }
  }
  return ev;
}

Configuration to_configuration(const LineEvents& ev, const Region& r) {
  // Line events of one region are collision free by construction, so the maps are filled directly.
  Configuration c;
  for (int i = 0; i < r.vertex_line_count(); ++i) {
    if (!ev.deaths[i].empty()) c.deaths_[r.vertex_lines()[i].vertex] = ev.deaths[i];
  }
  for (int j = 0; j < r.edge_line_count(); ++j) {
    if (!ev.bridges[j].empty()) c.bridges_[r.edge_lines()[j].edge] = ev.bridges[j];
  }
  return c;
}

Configuration restrict(const Configuration& c, const Region& r) { return to_configuration(to_line_events(c, r), r); }

std::string serialize_configuration(const Configuration& c, const Graph& g) {
  nlohmann::ordered_json doc;
  doc["deaths"] = nlohmann::ordered_json::array();
  for (const auto& [v, times] : c.deaths()) doc["deaths"].push_back({{"vertex", g.vertex_name(v)}, {"times", times}});
  doc["bridges"] = nlohmann::ordered_json::array();
  for (const auto& [e, times] : c.bridges()) doc["bridges"].push_back({{"edge", g.edge_name(e)}, {"times", times}});
  return doc.dump(2) + "\n";
}

Configuration parse_configuration(std::string_view json_text, const Graph& g) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  Configuration c;
  try {
    for (const auto& item : doc.at("deaths")) {
      VertexAddress v = g.find_vertex(item.at("vertex").get<std::string>());
      for (const auto& t : item.at("times")) c.insert(g, Death{v, t.get<double>()});
    }
    for (const auto& item : doc.at("bridges")) {
      EdgeAddress e = g.find_edge(item.at("edge").get<std::string>());
      for (const auto& t : item.at("times")) c.insert(g, Bridge{e, t.get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return c;
}

}  // namespace fkstar
