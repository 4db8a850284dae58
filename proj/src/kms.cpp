#include "shiftthermo/kms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shiftthermo {

std::string_view to_string(KmsRegionKind k) {
  switch (k) {
    case KmsRegionKind::AllReal: return "ALL_REAL";
    case KmsRegionKind::Singleton: return "SINGLETON";
    case KmsRegionKind::HalfLine: return "HALF_LINE";
    case KmsRegionKind::Empty: return "EMPTY";
    case KmsRegionKind::UnboundedNone: return "UNBOUNDED_NONE";
  }
  return "?";
}

bool KmsRegion::contains(double beta) const {
  switch (region) {
    case KmsRegionKind::AllReal: return true;
    case KmsRegionKind::Singleton: return beta >= beta0_lo && beta <= beta0_hi;
    case KmsRegionKind::HalfLine: return beta >= beta0_lo;
    default: return false;
  }
}

namespace {

struct Bisection {
  KmsRegion& out;
  const Potential& phi;
  const GraphModel& g;
  std::size_t N;

  PressureEstimate at(double beta) {
    auto p = global_pressure(phi.scaled(-beta), g, N);
    out.samples.push_back({beta, p});
    return p;
  }

  // Shrinks [lo, hi] with P(lo) >= 0 >= P(hi) to width tol; returns the end-point errors.
  std::pair<double, double> run(double& lo, double& hi, double tol, double err_lo, double err_hi) {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const auto p = at(mid);
      if (p.point > 0.0) {
        lo = mid;
        err_lo = p.half_width();
      } else {
        hi = mid;
        err_hi = p.half_width();
      }
    }
    return {err_lo, err_hi};
  }
};

}  // namespace

KmsRegion kms_region(const Potential& phi, const GraphModel& g, const KmsOptions& opt) {
  KmsRegion out;
  const auto rep = nonwandering(g);
  out.case_tag = rep.case_tag;
  std::tie(out.a, out.b) = phi.bounds(g);
  if (rep.case_tag == NwCase::Empty) {
    out.region = KmsRegionKind::AllReal;
    return out;
  }
  const bool infinite = rep.case_tag == NwCase::Infinite;
  if (infinite && (!(out.a > 0.0) || !std::isfinite(out.b))) {
    throw Error(ErrorCode::UnboundedPotential, "phi must be bounded away from 0 and infinity on P(NW_G)");
  }
  Bisection bis{out, phi, g, opt.N};
  const auto p0 = bis.at(0.0);
  if (p0.point == std::numeric_limits<double>::infinity()) {
    out.region = KmsRegionKind::UnboundedNone;
    out.beta0 = out.beta0_lo = out.beta0_hi = std::numeric_limits<double>::infinity();
    return out;
  }

  double lo = 0.0, hi = 0.0, err_lo = p0.half_width(), err_hi = p0.half_width();
  const double slope = out.a > 0.0 ? out.a : 1.0;
  if (out.a > 0.0) {
    // P(0) - beta b <= P(-beta phi) <= P(0) - beta a.
    lo = p0.point / out.b;
    hi = p0.point / out.a;
    const auto plo = bis.at(lo);
    const auto phi_hi = bis.at(hi);
    err_lo = plo.half_width();
    err_hi = phi_hi.half_width();
    if (plo.point < -err_lo || phi_hi.point > err_hi) {
      out.searched_lo = lo;
      out.searched_hi = hi;
      if (!infinite) {
        out.region = KmsRegionKind::Empty;
        return out;
      }
    }
  } else {
    // phi not strictly positive (finite case): coarse scan for a sign change.
    lo = -64.0;
    hi = 64.0;
    double prev_beta = lo;
    auto prev = bis.at(lo);
    bool found = false;
    for (int i = 1; i <= 128 && !found; ++i) {
      const double beta = -64.0 + i;
      const auto p = bis.at(beta);
      if ((prev.point > 0.0) != (p.point > 0.0)) {
        found = true;
        lo = prev.point > 0.0 ? prev_beta : beta;
        hi = prev.point > 0.0 ? beta : prev_beta;
        err_lo = prev.half_width();
        err_hi = p.half_width();
      }
      prev = p;
      prev_beta = beta;
    }
    out.searched_lo = -64.0;
    out.searched_hi = 64.0;
    if (!found) {
      out.region = KmsRegionKind::Empty;
      return out;
    }
    if (lo > hi) std::swap(lo, hi);
  }
  out.searched_lo = std::min(lo, hi);
  out.searched_hi = std::max(lo, hi);
  std::tie(err_lo, err_hi) = bis.run(lo, hi, opt.tol, err_lo, err_hi);
  out.beta0 = 0.5 * (lo + hi);
  out.beta0_lo = lo - err_lo / slope;
  out.beta0_hi = hi + err_hi / slope;
  out.region = infinite ? KmsRegionKind::HalfLine : KmsRegionKind::Singleton;
  return out;
}

ConformalResult kms_certificate(const KmsRegion& region, double beta, const Potential& phi,
                                const GraphModel& g, const CylinderFunction& h, const ConstructOptions& opt) {
  if (!region.contains(beta)) {
    throw Error(ErrorCode::InvalidInput, "beta = " + std::to_string(beta) + " lies outside the KMS region");
  }
  if (region.region == KmsRegionKind::Singleton) {
    // Pin the zero of the exact core pressure inside the reported bracket.
    double lo = region.beta0_lo, hi = region.beta0_hi;
    if (core_spectrum(phi, lo, g).log_radius < 0.0 || core_spectrum(phi, hi, g).log_radius > 0.0) {
      lo = hi = beta;
    }
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      if (core_spectrum(phi, mid, g).log_radius > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return extend_from_core(g, phi, 0.5 * (lo + hi), opt.region_radius, opt.depth);
  }
  return construct_limit(phi, beta, g, h, opt);
}

}  // namespace shiftthermo
