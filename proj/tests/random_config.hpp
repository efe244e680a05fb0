#pragma once

#include "fkstar/config.hpp"
#include "fkstar/region.hpp"
#include "fkstar/rng.hpp"

// Random configuration over a region: a few deaths and bridges per line at
// uniform times, some of them just outside the windows.
inline fkstar::Configuration random_configuration(const fkstar::Graph& g, const fkstar::Region& r, fkstar::Rng& rng,
                                                  int max_per_line = 3) {
  using namespace fkstar;
  Configuration c;
  auto draw = [&](const Window& w) { return w.lo - 0.1 + rng.uniform() * (w.length() + 0.2); };
  for (const auto& vl : r.vertex_lines()) {
    int m = static_cast<int>(rng.below(max_per_line + 1));
    for (int k = 0; k < m; ++k) {
      try {
        c.insert(g, Death{vl.vertex, draw(vl.window)});
      } catch (const Error&) {
      }
    }
  }
  for (const auto& el : r.edge_lines()) {
    int m = static_cast<int>(rng.below(max_per_line + 1));
    for (int k = 0; k < m; ++k) {
      try {
        c.insert(g, Bridge{el.edge, draw(el.window)});
      } catch (const Error&) {
      }
    }
  }
  return c;
}
