#pragma once

// Conformal measures from ratio limits of resolvent sums along escaping
// sequences, the epsilon-regularised limit at zero pressure, eigenmeasures,
// residual checks, and the finite-core extension along the H-filtration.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shiftthermo/kernels.hpp"
#include "shiftthermo/potential.hpp"
#include "shiftthermo/pressure.hpp"
#include "shiftthermo/symbolic.hpp"
#include "shiftthermo/transfer.hpp"

namespace shiftthermo {

struct DivergingSequence {
  std::vector<BasePoint> points;
  // witnesses[i]: a path w from the support of h with w·points[i] in Z(support), so
  // points[i] lies in sigma^{|w|}(U).
  std::vector<FinitePath> witnesses;
  std::vector<VertexId> escape;  // s(points[i]), strictly increasing in |.|
};

DivergingSequence diverging_sequence(const GraphModel& g, const CylinderFunction& h, std::size_t count);

struct ResidualReport {
  double max_relative = 0.0;
  double mean_relative = 0.0;
  std::size_t checked = 0;
  std::optional<FinitePath> worst;
  double additivity_max = 0.0;
  std::size_t additivity_checked = 0;
};

struct ConstructOptions {
  std::size_t N = 60;            // pressure horizon
  std::size_t depth = 3;         // D
  int region_radius = 4;         // cylinders start at explored_vertices(region_radius)
  std::size_t sequence_count = 0;  // 0: region_radius + depth + 8
  std::size_t tail_points = 3;
  double stability_tol = 1e-6;
  double additivity_tol = 1e-9;
  std::vector<double> eps_schedule{0.1, 0.05, 0.025};
  SeriesOptions series;
  Exec exec = Exec::Parallel;
};

struct ConformalResult {
  CylinderMeasure measure;
  std::string method;  // fixed | limit | core
  double beta = 1.0;
  std::vector<double> eps_schedule;
  std::size_t series_terms = 0;
  double max_ratio_spread = 0.0;
  double max_tail_relative = 0.0;
  double max_extrapolation_spread = 0.0;
  std::map<FinitePath, double> extrapolation_spread;
  double normalization = 1.0;  // integral of h (or of the core reference cylinder)
  std::optional<PressureEstimate> pressure;
  ResidualReport residuals;
  double log_radius = 0.0;  // core route: log spectral radius of the state matrix
};

// All cylinders of length <= depth starting at explored_vertices(radius).
std::vector<FinitePath> region_cylinders(const GraphModel& g, int radius, std::size_t depth);

// m with L*_psi m = m, normalized so that the integral of h is 1. Refuses unless P(psi) < 0.
ConformalResult construct_fixed(const Potential& psi, const GraphModel& g, const CylinderFunction& h,
                                const DivergingSequence& seq, const ConstructOptions& opt);

// A (beta phi)-conformal measure as the eps -> 0 limit of the fixed constructions for
// psi_eps = -beta phi - eps. Refuses with PRESSURE_POSITIVE when P(-beta phi) > 0.
ConformalResult construct_limit(const Potential& phi, double beta, const GraphModel& g,
                                const CylinderFunction& h, const ConstructOptions& opt);

// m with L*_phi m = e^t m. Refuses with BELOW_THRESHOLD when t < P(phi).
ConformalResult eigenmeasure(const Potential& phi, double t, const GraphModel& g, const CylinderFunction& h,
                             const ConstructOptions& opt);

// Checks m(Z(mu)) = e^{-beta phi(mu)} m(Z(sigma mu)) on stored cylinders with k <= |mu| <= depth.
// depth = 0 selects m.depth().
ResidualReport verify(const CylinderMeasure& m, const Potential& phi, double beta, const GraphModel& g,
                      std::size_t depth = 0);

// log spectral radius of the core state matrix for -beta phi, and its right eigenvector.
struct CoreSpectrum {
  double log_radius = 0.0;
  std::vector<FinitePath> states;  // core paths of length k-1 (vertices when k = 1)
  std::vector<double> vector;      // normalized so the largest entry is 1
};
CoreSpectrum core_spectrum(const Potential& phi, double beta, const GraphModel& g);

ConformalResult extend_from_core(const GraphModel& g, const Potential& phi, double beta, int levels,
                                 std::size_t depth, double pressure_tol = 1e-9);

}  // namespace shiftthermo
