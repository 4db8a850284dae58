#include "shiftthermo/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace shiftthermo {

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::ExplicitFinite: return "ExplicitFinite";
    case GraphKind::Ladder: return "Ladder";
    case GraphKind::CoreWithInwardRays: return "CoreWithInwardRays";
    case GraphKind::ZRay: return "ZRay";
    case GraphKind::WeightedFullShift: return "WeightedFullShift";
  }
  return "?";
}

std::optional<GraphKind> parse_graph_kind(std::string_view name) {
  for (auto k : {GraphKind::ExplicitFinite, GraphKind::Ladder, GraphKind::CoreWithInwardRays,
                 GraphKind::ZRay, GraphKind::WeightedFullShift}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(NwCase c) {
  switch (c) {
    case NwCase::Empty: return "Empty";
    case NwCase::FiniteNonEmpty: return "FiniteNonEmpty";
    case NwCase::Infinite: return "Infinite";
  }
  return "?";
}

GraphModel::Adjacency GraphModel::build_adjacency(std::vector<Edge> edges) {
  if (edges.empty()) throw Error(ErrorCode::InvalidInput, "graph has no edges");
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].id == edges[i - 1].id) {
      throw Error(ErrorCode::InvalidInput, "duplicate edge id " + std::to_string(edges[i].id));
    }
  }
  std::set<VertexId> verts;
  for (const auto& e : edges) {
    verts.insert(e.source);
    verts.insert(e.range);
  }
  Adjacency adj;
  adj.vertices.assign(verts.begin(), verts.end());
  adj.outs.resize(adj.vertices.size());
  for (const auto& e : edges) {
    auto it = std::lower_bound(adj.vertices.begin(), adj.vertices.end(), e.source);
    adj.outs[static_cast<std::size_t>(it - adj.vertices.begin())].push_back(e.id);
  }
  for (std::size_t i = 0; i < adj.vertices.size(); ++i) {
    if (adj.outs[i].empty()) {
      throw Error(ErrorCode::InvalidInput,
                  "vertex " + std::to_string(adj.vertices[i]) + " is a sink");
    }
  }
  adj.edges = std::move(edges);
  return adj;
}

GraphModel GraphModel::explicit_finite(std::vector<Edge> edges) {
  GraphModel g;
  g.kind_ = GraphKind::ExplicitFinite;
  g.adj_ = build_adjacency(std::move(edges));
  return g;
}

GraphModel GraphModel::ladder() {
  GraphModel g;
  g.kind_ = GraphKind::Ladder;
  return g;
}

GraphModel GraphModel::z_ray() {
  GraphModel g;
  g.kind_ = GraphKind::ZRay;
  return g;
}

GraphModel GraphModel::weighted_full_shift(int symbols) {
  if (symbols < 1) throw Error(ErrorCode::InvalidInput, "full shift needs at least one symbol");
  std::vector<Edge> loops;
  for (int i = 0; i < symbols; ++i) loops.push_back({i, 0, 0});
  GraphModel g;
  g.kind_ = GraphKind::WeightedFullShift;
  g.adj_ = build_adjacency(std::move(loops));
  return g;
}

GraphModel GraphModel::core_with_inward_rays(std::vector<Edge> core, int rays,
                                             std::vector<VertexId> targets) {
  if (rays < 0) throw Error(ErrorCode::InvalidInput, "negative ray count");
  GraphModel g;
  g.kind_ = GraphKind::CoreWithInwardRays;
  g.adj_ = build_adjacency(std::move(core));
  g.rays_ = rays;
  if (targets.empty()) targets.assign(static_cast<std::size_t>(rays), g.adj_.vertices.front());
  if (targets.size() != static_cast<std::size_t>(rays)) {
    throw Error(ErrorCode::InvalidInput, "ray_targets must list one core vertex per ray");
  }
  for (VertexId t : targets) {
    if (!std::binary_search(g.adj_.vertices.begin(), g.adj_.vertices.end(), t)) {
      throw Error(ErrorCode::InvalidInput, "ray target " + std::to_string(t) + " is not a core vertex");
    }
  }
  g.ray_targets_ = std::move(targets);
  g.ray_vertex_base_ = g.adj_.vertices.back() + 1;
  g.ray_edge_base_ = g.adj_.edges.back().id + 1;
  return g;
}

const std::vector<EdgeId>* GraphModel::explicit_out(VertexId v) const {
  auto it = std::lower_bound(adj_.vertices.begin(), adj_.vertices.end(), v);
  if (it == adj_.vertices.end() || *it != v) return nullptr;
  return &adj_.outs[static_cast<std::size_t>(it - adj_.vertices.begin())];
}

const Edge* GraphModel::explicit_edge(EdgeId e) const {
  auto it = std::lower_bound(adj_.edges.begin(), adj_.edges.end(), e,
                             [](const Edge& a, EdgeId id) { return a.id < id; });
  if (it == adj_.edges.end() || it->id != e) return nullptr;
  return &*it;
}

bool GraphModel::has_vertex(VertexId v) const {
  switch (kind_) {
    case GraphKind::Ladder: return v >= 0;
    case GraphKind::ZRay: return true;
    case GraphKind::CoreWithInwardRays:
      if (v >= ray_vertex_base_) return rays_ > 0;
      return explicit_out(v) != nullptr;
    default: return explicit_out(v) != nullptr;
  }
}

bool GraphModel::has_edge(EdgeId e) const {
  switch (kind_) {
    case GraphKind::Ladder: return e >= 0;
    case GraphKind::ZRay: return true;
    case GraphKind::CoreWithInwardRays:
      if (e >= ray_edge_base_) return rays_ > 0;
      return explicit_edge(e) != nullptr;
    default: return explicit_edge(e) != nullptr;
  }
}

VertexId GraphModel::source(EdgeId e) const {
  switch (kind_) {
    case GraphKind::Ladder:
      if (e < 0) break;
      return e / 2;
    case GraphKind::ZRay: return e;
    case GraphKind::CoreWithInwardRays:
      if (e >= ray_edge_base_) {
        if (rays_ == 0) break;
        return ray_vertex_base_ + (e - ray_edge_base_);
      }
      [[fallthrough]];
    default:
      if (const Edge* edge = explicit_edge(e)) return edge->source;
  }
  throw Error(ErrorCode::InvalidInput, "unknown edge " + std::to_string(e));
}

VertexId GraphModel::range(EdgeId e) const {
  switch (kind_) {
    case GraphKind::Ladder:
      if (e < 0) break;
      return (e % 2 == 0) ? e / 2 + 1 : 0;
    case GraphKind::ZRay: return e - 1;
    case GraphKind::CoreWithInwardRays:
      if (e >= ray_edge_base_) {
        if (rays_ == 0) break;
        const auto offset = e - ray_edge_base_;
        const auto level = offset / rays_ + 1;
        const auto ray = static_cast<int>(offset % rays_);
        if (level == 1) return ray_targets_[static_cast<std::size_t>(ray)];
        return ray_vertex(ray, static_cast<int>(level - 1));
      }
      [[fallthrough]];
    default:
      if (const Edge* edge = explicit_edge(e)) return edge->range;
  }
  throw Error(ErrorCode::InvalidInput, "unknown edge " + std::to_string(e));
}

std::vector<EdgeId> GraphModel::out_edges(VertexId v) const {
  std::vector<EdgeId> out;
  for_each_out_edge(v, [&](EdgeId e) { out.push_back(e); });
  return out;
}

std::size_t GraphModel::max_out_degree() const {
  switch (kind_) {
    case GraphKind::Ladder: return 2;
    case GraphKind::ZRay: return 1;
    default: {
      std::size_t m = 1;
      for (const auto& o : adj_.outs) m = std::max(m, o.size());
      return m;
    }
  }
}

const std::vector<VertexId>& GraphModel::finite_vertices() const {
  if (kind_ == GraphKind::Ladder || kind_ == GraphKind::ZRay) {
    throw Error(ErrorCode::InvalidInput, "graph has no finite vertex list");
  }
  return adj_.vertices;
}

const std::vector<Edge>& GraphModel::finite_edges() const {
  if (kind_ == GraphKind::Ladder || kind_ == GraphKind::ZRay) {
    throw Error(ErrorCode::InvalidInput, "graph has no finite edge list");
  }
  return adj_.edges;
}

std::vector<VertexId> GraphModel::explored_vertices(int radius) const {
  std::vector<VertexId> out;
  switch (kind_) {
    case GraphKind::Ladder:
      for (VertexId v = 0; v <= radius; ++v) out.push_back(v);
      break;
    case GraphKind::ZRay:
      for (VertexId v = -radius; v <= radius; ++v) out.push_back(v);
      break;
    case GraphKind::CoreWithInwardRays:
      out = adj_.vertices;
      for (int level = 1; level <= radius; ++level) {
        for (int r = 0; r < rays_; ++r) out.push_back(ray_vertex(r, level));
      }
      std::sort(out.begin(), out.end());
      break;
    default:
      out = adj_.vertices;
  }
  return out;
}

VertexId GraphModel::ray_vertex(int ray, int level) const {
  if (kind_ != GraphKind::CoreWithInwardRays || ray < 0 || ray >= rays_ || level < 0) {
    throw Error(ErrorCode::InvalidInput, "no such ray vertex");
  }
  if (level == 0) return ray_targets_[static_cast<std::size_t>(ray)];
  return ray_vertex_base_ + static_cast<VertexId>(level - 1) * rays_ + ray;
}

EdgeId GraphModel::ray_edge(int ray, int level) const {
  if (kind_ != GraphKind::CoreWithInwardRays || ray < 0 || ray >= rays_ || level < 1) {
    throw Error(ErrorCode::InvalidInput, "no such ray edge");
  }
  return ray_edge_base_ + static_cast<EdgeId>(level - 1) * rays_ + ray;
}

int GraphModel::ray_level_of_vertex(VertexId v) const {
  if (kind_ != GraphKind::CoreWithInwardRays || v < ray_vertex_base_) return 0;
  return static_cast<int>((v - ray_vertex_base_) / rays_) + 1;
}

int GraphModel::ray_level_of_edge(EdgeId e) const {
  if (kind_ != GraphKind::CoreWithInwardRays || e < ray_edge_base_) return 0;
  return static_cast<int>((e - ray_edge_base_) / rays_) + 1;
}

std::string GraphModel::edge_label(EdgeId e) const {
  if (kind_ == GraphKind::Ladder) {
    return (e % 2 == 0 ? "u_" : "d_") + std::to_string(e / 2);
  }
  return std::to_string(e);
}

std::optional<EdgeId> GraphModel::parse_edge_label(std::string_view token) const {
  auto parse_int = [](std::string_view s) -> std::optional<std::int64_t> {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  if (kind_ == GraphKind::Ladder && token.size() > 2 && token[1] == '_' &&
      (token[0] == 'u' || token[0] == 'd')) {
    auto n = parse_int(token.substr(2));
    if (!n || *n < 0) return std::nullopt;
    return token[0] == 'u' ? 2 * *n : 2 * *n + 1;
  }
  auto id = parse_int(token);
  if (!id || !has_edge(*id)) return std::nullopt;
  return id;
}

std::optional<std::vector<EdgeId>> find_cycle_through(const GraphModel& g, VertexId v,
                                                      int max_len) {
  struct Parent {
    VertexId vertex;
    EdgeId edge;
    int depth;
  };
  std::map<VertexId, Parent> seen;
  std::queue<VertexId> frontier;
  seen.emplace(v, Parent{v, -1, 0});
  frontier.push(v);
  while (!frontier.empty()) {
    VertexId u = frontier.front();
    frontier.pop();
    const int depth = seen.at(u).depth;
    if (depth >= max_len) continue;
    std::optional<EdgeId> closing;
    g.for_each_out_edge(u, [&](EdgeId e) {
      if (closing) return;
      VertexId w = g.range(e);
      if (w == v) {
        closing = e;
        return;
      }
      if (!seen.count(w)) {
        seen.emplace(w, Parent{u, e, depth + 1});
        frontier.push(w);
      }
    });
    if (closing) {
      std::vector<EdgeId> path{*closing};
      for (VertexId cur = u; cur != v;) {
        const auto& p = seen.at(cur);
        path.push_back(p.edge);
        cur = p.vertex;
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
  }
  return std::nullopt;
}

namespace {

// Strongly connected components of a finite adjacency given as index lists.
// Returns a component index per vertex and, per component, whether it carries a cycle.
struct SccResult {
  std::vector<int> comp;
  std::vector<bool> cyclic;
};

SccResult strongly_connected(const std::vector<std::vector<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : succ[static_cast<std::size_t>(u)]) {
        if (!reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)]) {
          reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
      }
    }
  }
  SccResult res;
  res.comp.assign(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int u = 0; u < n; ++u) {
    if (res.comp[static_cast<std::size_t>(u)] >= 0) continue;
    res.comp[static_cast<std::size_t>(u)] = next;
    bool cyclic = reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(u)];
    for (int w = u + 1; w < n; ++w) {
      if (reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] &&
          reach[static_cast<std::size_t>(w)][static_cast<std::size_t>(u)]) {
        res.comp[static_cast<std::size_t>(w)] = next;
      }
    }
    res.cyclic.push_back(cyclic);
    ++next;
  }
  return res;
}

struct FiniteView {
  std::vector<VertexId> vertices;
  std::vector<std::vector<int>> succ;  // successor indices
  std::vector<std::vector<bool>> reach;
};

FiniteView finite_view(const std::vector<VertexId>& vertices, const std::vector<Edge>& edges) {
  FiniteView fv;
  fv.vertices = vertices;
  fv.succ.resize(vertices.size());
  auto index = [&](VertexId v) {
    return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
  };
  for (const auto& e : edges) fv.succ[static_cast<std::size_t>(index(e.source))].push_back(index(e.range));
  return fv;
}

// Vertices of cyclic components plus the gcd of cycle lengths through them.
std::pair<std::vector<VertexId>, int> finite_nonwandering(const std::vector<VertexId>& vertices,
                                                         const std::vector<Edge>& edges) {
  auto fv = finite_view(vertices, edges);
  auto scc = strongly_connected(fv.succ);
  std::vector<VertexId> nw;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (scc.cyclic[static_cast<std::size_t>(scc.comp[i])]) nw.push_back(vertices[i]);
  }
  int period = 0;
  for (std::size_t c = 0; c < scc.cyclic.size(); ++c) {
    if (!scc.cyclic[c]) continue;
    // BFS levels inside the component; period = gcd of level defects over internal edges.
    std::vector<int> level(vertices.size(), -1);
    std::size_t root = 0;
    while (scc.comp[root] != static_cast<int>(c)) ++root;
    level[root] = 0;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (int w : fv.succ[u]) {
        auto wi = static_cast<std::size_t>(w);
        if (scc.comp[wi] != static_cast<int>(c)) continue;
        if (level[wi] < 0) {
          level[wi] = level[u] + 1;
          q.push(wi);
        }
        period = std::gcd(period, std::abs(level[u] + 1 - level[wi]));
      }
    }
  }
  return {nw, period};
}

bool finite_cofinal(const std::vector<VertexId>& vertices, const std::vector<Edge>& edges) {
  auto fv = finite_view(vertices, edges);
  auto scc = strongly_connected(fv.succ);
  const auto n = vertices.size();
  // Every vertex must reach every cyclic component: infinite paths end in one.
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (int w : fv.succ[u]) {
        auto wi = static_cast<std::size_t>(w);
        if (!seen[wi]) {
          seen[wi] = true;
          stack.push_back(wi);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (scc.cyclic[static_cast<std::size_t>(scc.comp[t])] && !seen[t]) return false;
    }
  }
  return true;
}

void check_explore_radius(const GraphModel& g, int explore_radius) {
  if (!g.is_finite() || explore_radius <= 0) return;
  for (VertexId v : g.finite_vertices()) {
    if (std::llabs(v) > explore_radius) {
      throw Error(ErrorCode::Undecided, "vertex " + std::to_string(v) + " lies outside the exploration ball");
    }
  }
}

}  // namespace

NonWanderingReport nonwandering(const GraphModel& g, int explore_radius) {
  check_explore_radius(g, explore_radius);
  NonWanderingReport rep;
  switch (g.kind()) {
    case GraphKind::ZRay:
      rep.case_tag = NwCase::Empty;
      rep.contains = [](VertexId) { return false; };
      return rep;
    case GraphKind::Ladder: {
      rep.case_tag = NwCase::Infinite;
      rep.period = 1;  // d_0 is a loop
      rep.contains = [](VertexId v) { return v >= 0; };
      for (VertexId v = 0; v <= 5; ++v) {
        auto cycle = find_cycle_through(g, v, static_cast<int>(2 * v + 4));
        if (!cycle) throw Error(ErrorCode::Undecided, "no cycle certificate found");
        rep.vertices.push_back(v);
        rep.certificate.push_back(std::move(*cycle));
      }
      return rep;
    }
    default:
      break;
  }
  auto [nw, period] = finite_nonwandering(g.finite_vertices(), g.finite_edges());
  rep.case_tag = nw.empty() ? NwCase::Empty : NwCase::FiniteNonEmpty;
  rep.period = period;
  rep.vertices = nw;
  for (VertexId v : nw) {
    auto cycle = find_cycle_through(g, v, static_cast<int>(g.finite_vertices().size()));
    if (cycle) rep.certificate.push_back(std::move(*cycle));
  }
  rep.contains = [set = nw](VertexId v) { return std::binary_search(set.begin(), set.end(), v); };
  return rep;
}

std::optional<bool> is_cofinal(const GraphModel& g, int explore_radius) {
  try {
    check_explore_radius(g, explore_radius);
  } catch (const Error&) {
    return std::nullopt;
  }
  switch (g.kind()) {
    case GraphKind::Ladder:
      // Every vertex reaches 0 through its down-edge and 0 reaches every vertex.
      return true;
    case GraphKind::ZRay:
      // Vertex m reaches the tail of the path from n once the tail passes below m.
      return true;
    case GraphKind::CoreWithInwardRays:
      // Ray vertices flow into the core, so cofinality reduces to the core.
      return finite_cofinal(g.finite_vertices(), g.finite_edges());
    default:
      return finite_cofinal(g.finite_vertices(), g.finite_edges());
  }
}

HFiltration h_filtration(const GraphModel& g, int levels) {
  auto rep = nonwandering(g);
  if (rep.case_tag != NwCase::FiniteNonEmpty) {
    throw Error(ErrorCode::WrongCase, "H-filtration needs a finite non-empty NW_G");
  }
  const auto region = g.explored_vertices(levels + 1);
  HFiltration filt;
  filt.levels.push_back(rep.vertices);
  for (int n = 1; n <= levels; ++n) {
    const auto& prev = filt.levels.back();
    std::vector<VertexId> next;
    for (VertexId w : region) {
      bool inside = true;
      g.for_each_out_edge(w, [&](EdgeId e) {
        if (!std::binary_search(prev.begin(), prev.end(), g.range(e))) inside = false;
      });
      if (inside) next.push_back(w);
    }
    filt.levels.push_back(std::move(next));
  }
  return filt;
}

}  // namespace shiftthermo
