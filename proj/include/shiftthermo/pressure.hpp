#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "shiftthermo/kernels.hpp"
#include "shiftthermo/potential.hpp"
#include "shiftthermo/symbolic.hpp"

namespace shiftthermo {

enum class PressureMethod { Gurevich, Pointwise, ExpFamily };
std::string_view to_string(PressureMethod m);

struct PressureEstimate {
  double point = kLogZero;
  double lo = kLogZero;
  double hi = kLogZero;
  std::vector<std::pair<std::size_t, double>> sequence;  // (n, a_n = log(S_n) / n)
  PressureMethod method = PressureMethod::Gurevich;
  std::size_t N = 0;

  double half_width() const { return 0.5 * (hi - lo); }
};

// Turns log S_n (index n = 0..N, entry 0 ignored) into an estimate of
// lim (1/n) log S_n. The point value is the growth slope over the tail window
// [ceil(N/2), N]; the interval half-width is the slope's drift against the
// window [ceil(N/4), ceil(N/2)] plus `extra_halfwidth`.
PressureEstimate estimate_growth(const std::vector<double>& log_terms, PressureMethod method,
                                 double extra_halfwidth);

// log Z_n, n = 0..N, for Z_n the weighted count of period-n points in Z(mu).
std::vector<double> periodic_log_sums(const Potential& phi, const GraphModel& g, const FinitePath& mu,
                                      std::size_t N);

PressureEstimate gurevich(const Potential& phi, const GraphModel& g, const FinitePath& mu, std::size_t N);
PressureEstimate pointwise(const Potential& phi, const GraphModel& g, const BasePoint& x,
                           const CylinderFunction& f, std::size_t N);
// Gurevich pressure through the first non-wandering vertex; -inf when NW_G is empty.
PressureEstimate global_pressure(const Potential& phi, const GraphModel& g, std::size_t N);

struct PressureCurve {
  struct Sample {
    double beta;
    PressureEstimate p;
  };
  std::vector<Sample> samples;
  double a = 0.0, b = 0.0;  // bounds of phi on P(NW_G)
  // For adjacent samples beta < beta': (beta'-beta) a <= P(-beta phi) - P(-beta' phi) <= (beta'-beta) b.
  bool sandwich_holds = true;
  double worst_sandwich_excess = 0.0;
};

PressureCurve pressure_of_beta(const Potential& phi, const GraphModel& g, const std::vector<double>& betas,
                               std::size_t N, Exec exec = Exec::Parallel);

}  // namespace shiftthermo
