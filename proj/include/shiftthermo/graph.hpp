#pragma once

// Row-finite, sink-free countable directed graphs. Infinite graphs exist only
// as parametric families whose out-edges are computed on demand; all
// enumeration orders are by edge id.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shiftthermo/error.hpp"

namespace shiftthermo {

using VertexId = std::int64_t;
using EdgeId = std::int64_t;

struct Edge {
  EdgeId id;
  VertexId source;
  VertexId range;
};

enum class GraphKind { ExplicitFinite, Ladder, CoreWithInwardRays, ZRay, WeightedFullShift };

std::string_view to_string(GraphKind kind);
std::optional<GraphKind> parse_graph_kind(std::string_view name);

class GraphModel {
 public:
  // A finite graph from (id, source, range) triples. Every vertex must emit an edge.
  static GraphModel explicit_finite(std::vector<Edge> edges);
  // Vertices 0,1,2,...; up-edge u_n = 2n: n -> n+1 and down-edge d_n = 2n+1: n -> 0.
  static GraphModel ladder();
  // Vertices are all integers; the single edge with id v goes v -> v-1.
  static GraphModel z_ray();
  // A finite strongly connected core with `rays` infinite rays feeding into it.
  // Ray r has vertices at levels 1,2,...; level 1 points at targets[r] (default:
  // the smallest core vertex) and level n points at level n-1.
  static GraphModel core_with_inward_rays(std::vector<Edge> core, int rays,
                                          std::vector<VertexId> targets = {});
  // One vertex (id 0) with `symbols` loops, edge ids 0..symbols-1.
  static GraphModel weighted_full_shift(int symbols);

  GraphKind kind() const { return kind_; }
  bool is_finite() const {
    return kind_ == GraphKind::ExplicitFinite || kind_ == GraphKind::WeightedFullShift;
  }

  bool has_vertex(VertexId v) const;
  bool has_edge(EdgeId e) const;
  VertexId source(EdgeId e) const;
  VertexId range(EdgeId e) const;

  // Calls fn(edge_id) for each out-edge of v in increasing id order.
  template <class Fn>
  void for_each_out_edge(VertexId v, Fn&& fn) const {
    switch (kind_) {
      case GraphKind::Ladder:
        if (v >= 0) {
          fn(EdgeId{2 * v});
          fn(EdgeId{2 * v + 1});
        }
        return;
      case GraphKind::ZRay:
        fn(EdgeId{v});
        return;
      case GraphKind::CoreWithInwardRays:
        if (v >= ray_vertex_base_ && rays_ > 0) {
          fn(ray_edge_base_ + (v - ray_vertex_base_));
          return;
        }
        [[fallthrough]];
      case GraphKind::ExplicitFinite:
      case GraphKind::WeightedFullShift: {
        const auto* out = explicit_out(v);
        if (out != nullptr) {
          for (EdgeId e : *out) fn(e);
        }
        return;
      }
    }
  }

  std::vector<EdgeId> out_edges(VertexId v) const;
  std::size_t max_out_degree() const;

  // All vertices / edges of a finite graph, or of the finite core of a
  // CoreWithInwardRays graph. Throws for the other infinite families.
  const std::vector<VertexId>& finite_vertices() const;
  const std::vector<Edge>& finite_edges() const;

  // Sorted vertex ids of the family's reference region of the given radius:
  // Ladder 0..radius, ZRay -radius..radius, core plus ray levels 1..radius,
  // and all vertices for finite graphs.
  std::vector<VertexId> explored_vertices(int radius) const;

  // CoreWithInwardRays accessors; level 0 means a core vertex.
  int ray_count() const { return rays_; }
  const std::vector<VertexId>& ray_targets() const { return ray_targets_; }
  VertexId ray_vertex(int ray, int level) const;
  EdgeId ray_edge(int ray, int level) const;
  int ray_level_of_vertex(VertexId v) const;
  int ray_level_of_edge(EdgeId e) const;

  // Human-readable edge tokens: u_n / d_n on the Ladder, decimal ids elsewhere.
  std::string edge_label(EdgeId e) const;
  std::optional<EdgeId> parse_edge_label(std::string_view token) const;

 private:
  struct Adjacency {
    std::vector<Edge> edges;                 // sorted by id
    std::vector<VertexId> vertices;          // sorted
    std::vector<std::vector<EdgeId>> outs;   // parallel to vertices
  };

  static Adjacency build_adjacency(std::vector<Edge> edges);
  const std::vector<EdgeId>* explicit_out(VertexId v) const;
  const Edge* explicit_edge(EdgeId e) const;

  GraphKind kind_ = GraphKind::ExplicitFinite;
  Adjacency adj_;
  int rays_ = 0;
  std::vector<VertexId> ray_targets_;
  VertexId ray_vertex_base_ = 0;
  EdgeId ray_edge_base_ = 0;
};

enum class NwCase { Empty, FiniteNonEmpty, Infinite };
std::string_view to_string(NwCase c);

struct NonWanderingReport {
  NwCase case_tag = NwCase::Empty;
  // Explicit set for Empty / FiniteNonEmpty; sampled members for Infinite.
  std::vector<VertexId> vertices;
  // Cycles (edge lists) exhibited through sampled non-wandering vertices.
  std::vector<std::vector<EdgeId>> certificate;
  // gcd of cycle lengths through NW_G; 0 unless FiniteNonEmpty.
  int period = 0;
  std::function<bool(VertexId)> contains;
};

// explore_radius <= 0 selects the default (10 x the largest |vertex id|).
NonWanderingReport nonwandering(const GraphModel& g, int explore_radius = 0);

// nullopt means UNDECIDED.
std::optional<bool> is_cofinal(const GraphModel& g, int explore_radius = 0);

struct HFiltration {
  std::vector<std::vector<VertexId>> levels;  // levels[n] = H_n, sorted
};

HFiltration h_filtration(const GraphModel& g, int levels);

// Shortest cycle through v of length at most max_len, found by breadth-first search.
std::optional<std::vector<EdgeId>> find_cycle_through(const GraphModel& g, VertexId v,
                                                      int max_len);

}  // namespace shiftthermo
