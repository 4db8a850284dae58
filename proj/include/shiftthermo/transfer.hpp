#pragma once

// The Ruelle operator L_phi f(x) = sum_{sigma y = x} e^{phi(y)} f(y).
//
// Iterates are evaluated by a forward sweep: L^n f(x) sums over paths p of
// length n with r(p) = s(x), and since f has finite support every such p
// starts with a support cylinder. The sweep grows p edge by edge from the
// support, keyed by (end vertex, last k-1 edges), so in-degrees may be
// infinite (Ladder vertex 0) while out-degrees stay finite.

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

#include "shiftthermo/kernels.hpp"
#include "shiftthermo/logval.hpp"
#include "shiftthermo/potential.hpp"
#include "shiftthermo/symbolic.hpp"

namespace shiftthermo {

struct SweepKey {
  VertexId vertex = 0;
  std::uint8_t len = 0;
  std::array<EdgeId, kMaxPotentialDepth - 1> hist{};

  auto operator<=>(const SweepKey&) const = default;
};

class ForwardSweep {
 public:
  ForwardSweep(const Potential& phi, const GraphModel& g, const BasePoint& x);

  // Adds the weight of the cylinder mu, counting the windows fully inside mu.
  void seed(const FinitePath& mu, double log_weight);
  void seed(const SweepKey& key, double log_weight);

  // log of the sum over current paths p with r(p) = s(x) of w(p)·e^{windows reaching into x}.
  double close() const;
  void step();
  bool exhausted() const { return layer_.empty(); }
  std::size_t width() const { return layer_.size(); }

  static SweepKey key_of(const Potential& phi, const FinitePath& mu);
  static double inner_log_weight(const Potential& phi, const GraphModel& g, const FinitePath& mu);

 private:
  const Potential& phi_;
  const GraphModel& g_;
  VertexId target_;
  std::vector<EdgeId> x_head_;
  std::vector<std::pair<SweepKey, double>> layer_;
  double log_scale_ = 0.0;
};

// L^n_phi(f)(x) for n = 0..n_max from one sweep.
std::vector<SignedLog> iterate_sequence(const Potential& phi, const GraphModel& g,
                                        const CylinderFunction& f, const BasePoint& x,
                                        std::size_t n_max);

SignedLog apply_pointwise_log(const Potential& phi, const GraphModel& g, const CylinderFunction& f,
                              const BasePoint& x, std::size_t n);
double apply_pointwise(const Potential& phi, const GraphModel& g, const CylinderFunction& f,
                       const BasePoint& x, std::size_t n);

// L_phi f as a cylinder function of depth d-1. Needs d >= max(k, 1).
CylinderFunction apply_functional(const Potential& phi, const GraphModel& g, const CylinderFunction& f);

struct SeriesOptions {
  std::size_t min_terms = 8;
  std::size_t max_terms = 10000;
  double rel_tol = 1e-14;
  std::size_t window = 16;
  std::size_t zero_cutoff = 2000;
};

struct SeriesResult {
  double log_sum = kLogZero;
  std::size_t terms = 0;
  double log_tail_bound = kLogZero;  // bound on the omitted remainder
  bool converged = true;
  double decay_ratio = 0.0;          // geometric ratio of the last decade, 0 if unknown
};

// sum_{n>=0} L^n_phi(1_{Z(mu)})(x) for every mu, sharing one tail series per sweep key.
std::vector<SeriesResult> cylinder_series(const Potential& phi, const GraphModel& g,
                                          const std::vector<FinitePath>& cylinders,
                                          const BasePoint& x, const SeriesOptions& opt,
                                          Exec exec = Exec::Parallel);

// sum_{n>=0} L^n_phi(f)(x) for nonnegative f.
SeriesResult function_series(const Potential& phi, const GraphModel& g, const CylinderFunction& f,
                             const BasePoint& x, const SeriesOptions& opt, Exec exec = Exec::Parallel);

}  // namespace shiftthermo
