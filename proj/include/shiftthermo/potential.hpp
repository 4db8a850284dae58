#pragma once

// Locally constant potentials of finite depth k: phi(x) depends on the first
// k edges of x. Values are stored as raw rule values plus an affine map
// (scale, shift) so that beta-scaling and constant shifts share one code path.

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "shiftthermo/graph.hpp"
#include "shiftthermo/symbolic.hpp"

namespace shiftthermo {

inline constexpr std::size_t kMaxPotentialDepth = 8;

class Potential {
 public:
  enum class Rule { Constant, LadderUpDown, EdgeValues, CoreRay, Table };

  static Potential constant(double t);
  static Potential ladder_up_down(double t_up, double t_down);
  // Depth 1, one value per edge id. Finite graphs only.
  static Potential edge_values(std::map<EdgeId, double> values);
  // Depth 1 on CoreWithInwardRays: core edges from the map, the ray edge at
  // level n takes ray_levels[n-1] (the last entry repeats beyond the list).
  static Potential core_ray(std::map<EdgeId, double> core_values, std::vector<double> ray_levels);
  // Explicit table over length-k paths of a finite graph.
  static Potential table(std::size_t depth, std::map<std::vector<EdgeId>, double> values);

  Rule rule() const { return rule_; }
  std::size_t depth() const { return depth_; }

  // phi on any point whose first depth() edges are `window`.
  double value(const GraphModel& g, std::span<const EdgeId> window) const;

  Potential scaled(double c) const;
  Potential shifted(double c) const;

  // Declared sup-distance to the potential this one truncates (0 when exact).
  double truncation_variation = 0.0;

  // Throws InvalidInput unless the rule is defined on every length-k path of g.
  void validate(const GraphModel& g) const;

  // [inf, sup] of phi over points in P(NW_G); over all points when NW_G is empty.
  std::pair<double, double> bounds(const GraphModel& g) const;

  // Raw accessors used by serialization.
  double scale() const { return scale_; }
  double shift() const { return shift_; }
  const std::map<EdgeId, double>& edge_map() const { return edges_; }
  const std::vector<double>& ray_levels() const { return rays_; }
  const std::map<std::vector<EdgeId>, double>& table_values() const { return table_; }
  double up_value() const { return up_; }
  double down_value() const { return down_; }

 private:
  double raw(const GraphModel& g, std::span<const EdgeId> window) const;

  Rule rule_ = Rule::Constant;
  std::size_t depth_ = 1;
  double up_ = 0.0, down_ = 0.0;  // Constant uses up_
  std::map<EdgeId, double> edges_;
  std::vector<double> rays_;
  std::map<std::vector<EdgeId>, double> table_;
  double scale_ = 1.0;
  double shift_ = 0.0;
};

// phi_n = sum_{j<n} phi(sigma^j x) for x in Z(mu). Needs |mu| >= n + k - 1.
double birkhoff(const Potential& phi, const GraphModel& g, const FinitePath& mu, std::size_t n);
double birkhoff(const Potential& phi, const GraphModel& g, const BasePoint& x, std::size_t n);

// var_j(phi): sup |phi(x) - phi(y)| over x, y sharing their first j edges.
double variation(const Potential& phi, const GraphModel& g, std::size_t j);

struct BowenReport {
  bool holds = true;
  double constant = 0.0;
};
BowenReport bowen_check(const Potential& phi, const GraphModel& g);

}  // namespace shiftthermo
