#include "shiftthermo/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shiftthermo {

Potential Potential::constant(double t) {
  Potential p;
  p.rule_ = Rule::Constant;
  p.up_ = t;
  return p;
}

Potential Potential::ladder_up_down(double t_up, double t_down) {
  Potential p;
  p.rule_ = Rule::LadderUpDown;
  p.up_ = t_up;
  p.down_ = t_down;
  return p;
}

Potential Potential::edge_values(std::map<EdgeId, double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidInput, "edge potential has no values");
  Potential p;
  p.rule_ = Rule::EdgeValues;
  p.edges_ = std::move(values);
  return p;
}

Potential Potential::core_ray(std::map<EdgeId, double> core_values, std::vector<double> ray_levels) {
  if (ray_levels.empty()) throw Error(ErrorCode::InvalidInput, "ray_levels must not be empty");
  Potential p;
  p.rule_ = Rule::CoreRay;
  p.edges_ = std::move(core_values);
  p.rays_ = std::move(ray_levels);
  return p;
}

Potential Potential::table(std::size_t depth, std::map<std::vector<EdgeId>, double> values) {
  if (depth < 1 || depth > kMaxPotentialDepth) {
    throw Error(ErrorCode::InvalidInput,
                "potential depth must lie in 1.." + std::to_string(kMaxPotentialDepth));
  }
  for (const auto& [key, v] : values) {
    if (key.size() != depth) throw Error(ErrorCode::InvalidInput, "table key length differs from depth");
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "table value is not finite");
  }
  Potential p;
  p.rule_ = Rule::Table;
  p.depth_ = depth;
  p.table_ = std::move(values);
  return p;
}

double Potential::raw(const GraphModel& g, std::span<const EdgeId> window) const {
  switch (rule_) {
    case Rule::Constant:
      return up_;
    case Rule::LadderUpDown:
      return window[0] % 2 == 0 ? up_ : down_;
    case Rule::EdgeValues: {
      auto it = edges_.find(window[0]);
      if (it == edges_.end()) throw Error(ErrorCode::InvalidInput, "no potential value for edge " + g.edge_label(window[0]));
      return it->second;
    }
    case Rule::CoreRay: {
      const int level = g.ray_level_of_edge(window[0]);
      if (level > 0) return rays_[std::min<std::size_t>(static_cast<std::size_t>(level), rays_.size()) - 1];
      auto it = edges_.find(window[0]);
      if (it == edges_.end()) throw Error(ErrorCode::InvalidInput, "no potential value for edge " + g.edge_label(window[0]));
      return it->second;
    }
    case Rule::Table: {
      auto it = table_.find(std::vector<EdgeId>(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(depth_)));
      if (it == table_.end()) throw Error(ErrorCode::InvalidInput, "no potential value for a window");
      return it->second;
    }
  }
  return 0.0;
}

double Potential::value(const GraphModel& g, std::span<const EdgeId> window) const {
  if (window.size() < depth_) throw Error(ErrorCode::InsufficientDepth, "window shorter than the potential depth");
  return scale_ * raw(g, window) + shift_;
}

Potential Potential::scaled(double c) const {
  Potential p = *this;
  p.scale_ *= c;
  p.shift_ *= c;
  p.truncation_variation *= std::fabs(c);
  return p;
}

Potential Potential::shifted(double c) const {
  Potential p = *this;
  p.shift_ += c;
  return p;
}

void Potential::validate(const GraphModel& g) const {
  switch (rule_) {
    case Rule::Constant:
      return;
    case Rule::LadderUpDown:
      if (g.kind() != GraphKind::Ladder) throw Error(ErrorCode::InvalidInput, "up/down potential needs the Ladder");
      return;
    case Rule::CoreRay:
      if (g.kind() != GraphKind::CoreWithInwardRays) {
        throw Error(ErrorCode::InvalidInput, "core/ray potential needs a CoreWithInwardRays graph");
      }
      [[fallthrough]];
    case Rule::EdgeValues:
      if (!g.is_finite() && g.kind() != GraphKind::CoreWithInwardRays) {
        throw Error(ErrorCode::InvalidInput, "edge-value potentials need a finite edge set");
      }
      for (const auto& e : g.finite_edges()) {
        if (!edges_.count(e.id)) throw Error(ErrorCode::InvalidInput, "no potential value for edge " + std::to_string(e.id));
      }
      return;
    case Rule::Table:
      if (!g.is_finite()) throw Error(ErrorCode::InvalidInput, "table potentials need a finite graph");
      for (VertexId v : g.finite_vertices()) {
        for (const auto& p : paths_from(g, v, depth_)) {
          if (!table_.count(p.edges())) {
            throw Error(ErrorCode::InvalidInput, "table misses a path starting at vertex " + std::to_string(v));
          }
        }
      }
      return;
  }
}

std::pair<double, double> Potential::bounds(const GraphModel& g) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto take = [&](double raw_value) {
    const double v = scale_ * raw_value + shift_;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  switch (rule_) {
    case Rule::Constant:
      take(up_);
      return {lo, hi};
    case Rule::LadderUpDown:
      take(up_);
      take(down_);
      return {lo, hi};
    default:
      break;
  }
  auto rep = nonwandering(g);
  const bool use_all = rep.case_tag == NwCase::Empty;
  auto inside = [&](VertexId v) { return use_all || rep.contains(v); };
  if (rule_ == Rule::CoreRay && use_all) {
    for (double r : rays_) take(r);
  }
  if (rule_ == Rule::Table) {
    for (VertexId v : g.finite_vertices()) {
      if (!inside(v)) continue;
      for (const auto& p : paths_from(g, v, depth_)) {
        bool ok = true;
        for (EdgeId e : p.edges()) ok = ok && inside(g.range(e));
        if (ok) take(table_.at(p.edges()));
      }
    }
  } else {
    for (const auto& e : g.finite_edges()) {
      if (inside(e.source) && inside(e.range)) take(edges_.at(e.id));
    }
  }
  return {lo, hi};
}

double birkhoff(const Potential& phi, const GraphModel& g, const FinitePath& mu, std::size_t n) {
  const std::size_t k = phi.depth();
  if (n == 0) return 0.0;
  if (mu.length() < n + k - 1) {
    throw Error(ErrorCode::InsufficientDepth, "path of length " + std::to_string(mu.length()) +
                                                  " does not determine phi_" + std::to_string(n));
  }
  const auto& e = mu.edges();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += phi.value(g, std::span<const EdgeId>(e.data() + j, k));
  return s;
}

double birkhoff(const Potential& phi, const GraphModel& g, const BasePoint& x, std::size_t n) {
  if (n == 0) return 0.0;
  const auto e = x.first_edges(g, n + phi.depth() - 1);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += phi.value(g, std::span<const EdgeId>(e.data() + j, phi.depth()));
  return s;
}

double variation(const Potential& phi, const GraphModel& g, std::size_t j) {
  const double c = std::fabs(phi.scale());
  if (j >= phi.depth()) return 0.0;
  switch (phi.rule()) {
    case Potential::Rule::Constant:
      return 0.0;
    case Potential::Rule::LadderUpDown:
      return c * std::fabs(phi.up_value() - phi.down_value());
    case Potential::Rule::EdgeValues:
    case Potential::Rule::CoreRay: {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& [e, v] : phi.edge_map()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      for (double v : phi.ray_levels()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      (void)g;
      return c * (hi - lo);
    }
    case Potential::Rule::Table: {
      std::map<std::vector<EdgeId>, std::pair<double, double>> groups;
      for (const auto& [key, v] : phi.table_values()) {
        std::vector<EdgeId> prefix(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(j));
        auto [it, fresh] = groups.emplace(prefix, std::make_pair(v, v));
        if (!fresh) {
          it->second.first = std::min(it->second.first, v);
          it->second.second = std::max(it->second.second, v);
        }
      }
      double var = 0.0;
      for (const auto& [prefix, mm] : groups) var = std::max(var, mm.second - mm.first);
      return c * var;
    }
  }
  return 0.0;
}

BowenReport bowen_check(const Potential& phi, const GraphModel& g) {
  BowenReport rep;
  for (std::size_t j = 1; j < phi.depth(); ++j) rep.constant += variation(phi, g, j);
  return rep;
}

}  // namespace shiftthermo
