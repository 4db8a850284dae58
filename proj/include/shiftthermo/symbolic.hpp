#pragma once

// Finite paths, eventually periodic (or ray-following) base points, and the
// cylinder function / cylinder measure algebra.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "shiftthermo/graph.hpp"
#include "shiftthermo/logval.hpp"

namespace shiftthermo {

class FinitePath {
 public:
  FinitePath() = default;

  // The empty path sitting at vertex v; Z(.) of it is the vertex cylinder [v].
  static FinitePath vertex(VertexId v);
  // Throws InvalidInput unless consecutive edges compose.
  static FinitePath from_edges(const GraphModel& g, std::vector<EdgeId> edges);

  VertexId source() const { return start_; }
  VertexId range() const { return end_; }
  std::size_t length() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const std::vector<EdgeId>& edges() const { return edges_; }

  FinitePath extended(const GraphModel& g, EdgeId e) const;
  // Drops the first `count` edges (sigma^count applied to the cylinder word).
  FinitePath dropped(const GraphModel& g, std::size_t count) const;
  FinitePath truncated(const GraphModel& g, std::size_t length) const;
  FinitePath concatenated(const GraphModel& g, const FinitePath& other) const;
  bool starts_with(const FinitePath& prefix) const;

  auto operator<=>(const FinitePath&) const = default;

 private:
  VertexId start_ = 0;
  std::vector<EdgeId> edges_;
  VertexId end_ = 0;
};

// All paths of exactly `length` edges starting at v, in lexicographic edge order.
std::vector<FinitePath> paths_from(const GraphModel& g, VertexId v, std::size_t length);

// An infinite path: a finite prefix followed either by a repeating loop or by
// the ray that always takes the lowest-id out-edge.
class BasePoint {
 public:
  enum class Tail { Loop, GreedyRay };

  static BasePoint periodic(const GraphModel& g, FinitePath prefix, FinitePath loop);
  static BasePoint greedy_ray(const GraphModel& g, FinitePath prefix);

  VertexId source() const { return prefix_.source(); }
  Tail tail() const { return tail_; }
  const FinitePath& prefix() const { return prefix_; }
  const FinitePath& loop() const { return loop_; }

  EdgeId edge_at(const GraphModel& g, std::size_t i) const;
  std::vector<EdgeId> first_edges(const GraphModel& g, std::size_t count) const;
  BasePoint shifted(const GraphModel& g) const;
  bool in_cylinder(const GraphModel& g, const FinitePath& mu) const;

  friend bool operator==(const BasePoint&, const BasePoint&) = default;

 private:
  FinitePath prefix_;
  FinitePath loop_;
  Tail tail_ = Tail::Loop;
};

// Finitely supported combination of cylinders of a common depth.
class CylinderFunction {
 public:
  explicit CylinderFunction(std::size_t depth = 0) : depth_(depth) {}

  static CylinderFunction indicator(const FinitePath& mu);

  std::size_t depth() const { return depth_; }
  const std::map<FinitePath, SignedLog>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool nonnegative() const;

  void add(const FinitePath& mu, SignedLog weight);
  void add(const FinitePath& mu, double weight) { add(mu, SignedLog::from_double(weight)); }

  CylinderFunction scaled(double factor) const;
  // Same function written over cylinders of a larger depth.
  CylinderFunction refined(const GraphModel& g, std::size_t new_depth) const;
  // Positive and negative parts, both returned with nonnegative weights.
  std::pair<CylinderFunction, CylinderFunction> split_signs() const;

 private:
  std::size_t depth_;
  std::map<FinitePath, SignedLog> terms_;
};

// alpha * f + beta * h, refining both to the larger depth.
CylinderFunction linear_combination(const GraphModel& g, double alpha, const CylinderFunction& f,
                                    double beta, const CylinderFunction& h);

double evaluate(const GraphModel& g, const CylinderFunction& f, const BasePoint& x);

enum class FiniteTotal { Yes, No, Unknown };

// Cylinder masses up to a working depth, stored as natural logs.
class CylinderMeasure {
 public:
  explicit CylinderMeasure(std::size_t depth = 0) : depth_(depth) {}

  std::size_t depth() const { return depth_; }
  const std::map<FinitePath, double>& log_values() const { return values_; }
  FiniteTotal finite_total = FiniteTotal::Unknown;

  void set_log(const FinitePath& mu, double log_value);
  void set(const FinitePath& mu, double value);
  std::optional<double> log_value(const FinitePath& mu) const;
  // Throws InvalidInput when the cylinder is not stored.
  double value(const FinitePath& mu) const;

  CylinderMeasure restrict_depth(std::size_t d) const;
  CylinderMeasure rescaled(double factor) const;

  // Integral of a cylinder function whose cylinders are all stored.
  double integrate(const CylinderFunction& f) const;

  struct Additivity {
    double max_relative = 0.0;
    std::size_t checked = 0;
  };
  // Checks m(Z(mu)) = sum_e m(Z(mu e)) wherever every extension is stored.
  Additivity additivity(const GraphModel& g) const;

 private:
  std::size_t depth_;
  std::map<FinitePath, double> values_;
};

}  // namespace shiftthermo
