#pragma once

// Random (graph, potential, f, x, n) instances for DP-vs-enumeration checks.

#include <random>
#include <string>

#include "shiftthermo/potential.hpp"
#include "shiftthermo/symbolic.hpp"

namespace randinst {

using namespace shiftthermo;

struct Instance {
  GraphModel g;
  Potential phi;
  CylinderFunction f;
  BasePoint x;
  std::size_t n = 0;
  std::string label;
};

inline GraphModel random_finite(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(1, 5), deg(1, 3);
  const int n = nv(rng);
  std::uniform_int_distribution<int> target(0, n - 1);
  std::vector<Edge> edges;
  EdgeId id = 0;
  for (int v = 0; v < n; ++v) {
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) edges.push_back({id++, v, target(rng)});
  }
  return GraphModel::explicit_finite(std::move(edges));
}

inline Potential random_potential(std::mt19937_64& rng, const GraphModel& g, std::size_t depth) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  switch (g.kind()) {
    case GraphKind::Ladder:
      return Potential::ladder_up_down(val(rng), val(rng));
    case GraphKind::CoreWithInwardRays: {
      std::map<EdgeId, double> core;
      for (const auto& e : g.finite_edges()) core[e.id] = val(rng);
      return Potential::core_ray(core, {val(rng), val(rng), val(rng)});
    }
    default:
      break;
  }
  if (depth == 1) {
    std::map<EdgeId, double> m;
    for (const auto& e : g.finite_edges()) m[e.id] = val(rng);
    return Potential::edge_values(m);
  }
  std::map<std::vector<EdgeId>, double> table;
  for (const auto& e : g.finite_edges()) {
    for (EdgeId f : g.out_edges(e.range)) table[{e.id, f}] = val(rng);
  }
  return Potential::table(2, table);
}

inline CylinderFunction random_function(std::mt19937_64& rng, const GraphModel& g, VertexId near) {
  std::uniform_int_distribution<int> depth(0, 2), terms(1, 4);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  std::vector<VertexId> starts = g.is_finite() ? g.finite_vertices() : g.explored_vertices(3);
  if (starts.empty()) starts.push_back(near);
  const auto d = static_cast<std::size_t>(depth(rng));
  CylinderFunction f(d);
  const int k = terms(rng);
  for (int i = 0; i < k; ++i) {
    const VertexId v = starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)];
    const auto paths = paths_from(g, v, d);
    if (paths.empty()) continue;
    f.add(paths[std::uniform_int_distribution<std::size_t>(0, paths.size() - 1)(rng)], w(rng));
  }
  if (f.empty()) f = CylinderFunction::indicator(FinitePath::vertex(near));
  return f;
}

inline Instance make(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> family(0, 9), nlen(0, 8), depth(1, 2);
  const int fam = family(rng);
  Instance in{GraphModel::ladder(), Potential::constant(0.0), CylinderFunction(0),
              BasePoint::greedy_ray(GraphModel::ladder(), FinitePath::vertex(0)), 0, ""};
  std::size_t k = static_cast<std::size_t>(depth(rng));
  if (fam < 6) {
    in.g = random_finite(rng);
    in.label = "finite";
  } else if (fam < 8) {
    in.g = GraphModel::ladder();
    in.label = "ladder";
    k = 1;
  } else if (fam < 9) {
    in.g = GraphModel::core_with_inward_rays({{0, 0, 0}, {1, 0, 1}, {2, 1, 0}}, 2);
    in.label = "core";
    k = 1;
  } else {
    in.g = GraphModel::weighted_full_shift(std::uniform_int_distribution<int>(2, 4)(rng));
    in.label = "full_shift";
  }
  in.phi = random_potential(rng, in.g, k);

  // base point over a recurrent vertex, or a greedy ray on the ladder
  VertexId v = 0;
  if (in.g.is_finite()) {
    const auto& vs = in.g.finite_vertices();
    for (int tries = 0; tries < 20; ++tries) {
      v = vs[std::uniform_int_distribution<std::size_t>(0, vs.size() - 1)(rng)];
      if (find_cycle_through(in.g, v, 16)) break;
    }
  } else if (in.g.kind() == GraphKind::Ladder) {
    v = std::uniform_int_distribution<int>(0, 5)(rng);
  }
  const auto cycle = find_cycle_through(in.g, v, 16);
  if (in.g.kind() == GraphKind::Ladder && (rng() & 1)) {
    in.x = BasePoint::greedy_ray(in.g, FinitePath::vertex(v));
  } else if (cycle) {
    in.x = BasePoint::periodic(in.g, FinitePath::vertex(v), FinitePath::from_edges(in.g, *cycle));
  } else {
    // every vertex of a random graph has an out-edge, so some cycle is reachable
    auto path = FinitePath::vertex(v);
    std::optional<std::vector<EdgeId>> c;
    while (!(c = find_cycle_through(in.g, path.range(), 16))) path = path.extended(in.g, in.g.out_edges(path.range()).front());
    in.x = BasePoint::periodic(in.g, path, FinitePath::from_edges(in.g, *c));
  }
  in.f = random_function(rng, in.g, in.x.source());
  in.n = static_cast<std::size_t>(nlen(rng));
  return in;
}

inline double relative_deviation(double a, double b) {
  if (a == b) return 0.0;
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

}  // namespace randinst
