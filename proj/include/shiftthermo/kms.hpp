#pragma once

// Inverse temperatures admitting gauge-invariant KMS weights, read off from
// the existence of beta phi-conformal measures.

#include <string_view>
#include <vector>

#include "shiftthermo/conformal.hpp"
#include "shiftthermo/pressure.hpp"

namespace shiftthermo {

enum class KmsRegionKind { AllReal, Singleton, HalfLine, Empty, UnboundedNone };
std::string_view to_string(KmsRegionKind k);

struct KmsRegion {
  NwCase case_tag = NwCase::Empty;
  KmsRegionKind region = KmsRegionKind::AllReal;
  double beta0 = 0.0;
  double beta0_lo = 0.0;
  double beta0_hi = 0.0;
  double searched_lo = 0.0;  // bracket searched for the pressure zero
  double searched_hi = 0.0;
  double a = 0.0, b = 0.0;   // bounds of phi on P(NW_G)
  std::vector<PressureCurve::Sample> samples;

  bool contains(double beta) const;
};

struct KmsOptions {
  double tol = 1e-3;
  std::size_t N = 60;
};

KmsRegion kms_region(const Potential& phi, const GraphModel& g, const KmsOptions& opt);

// A beta phi-conformal measure witnessing the KMS weight at beta.
ConformalResult kms_certificate(const KmsRegion& region, double beta, const Potential& phi,
                                const GraphModel& g, const CylinderFunction& h, const ConstructOptions& opt);

}  // namespace shiftthermo
