#pragma once

#include <string_view>
#include <vector>

#include "shiftthermo/kernels.hpp"
#include "shiftthermo/potential.hpp"
#include "shiftthermo/pressure.hpp"
#include "shiftthermo/symbolic.hpp"

namespace shiftthermo {

enum class Verdict { DissipativeCertified, Inconclusive };
std::string_view to_string(Verdict v);

struct DissipativityReport {
  Verdict verdict = Verdict::Inconclusive;
  PressureEstimate pressure;  // of -beta phi
  struct Sample {
    BasePoint point;
    std::vector<double> log_partial_sums;  // log S_n, n = 0..N
    double decay_ratio = 0.0;              // per-step ratio over the last decade of terms
    bool diverging = false;                // terms stop decaying, so S_N grows without bound
  };
  std::vector<Sample> samples;
};

// Every beta phi-conformal measure is dissipative once P(-beta phi) < 0; the
// partial sums of sum_n L^n_{-beta phi} f(x) are reported as diagnostics.
DissipativityReport dissipativity_test(const Potential& phi, double beta, const GraphModel& g,
                                       const CylinderFunction& f, const std::vector<BasePoint>& points,
                                       std::size_t N, Exec exec = Exec::Parallel);

}  // namespace shiftthermo
