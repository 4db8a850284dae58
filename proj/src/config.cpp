#include "shiftthermo/config.hpp"

#include "shiftthermo/io.hpp"

#ifndef SHIFTTHERMO_VERSION
#define SHIFTTHERMO_VERSION "0.0.0"
#endif

namespace shiftthermo {

std::string version_string() { return SHIFTTHERMO_VERSION; }

std::string fingerprint(const Defaults& d) {
  using io::format_double;
  std::string eps;
  for (double e : d.eps) {
    if (!eps.empty()) eps += ',';
    eps += format_double(e);
  }
  return "shiftthermo " + version_string() + " N=" + std::to_string(d.N) + " D=" + std::to_string(d.depth) +
         " tau=" + format_double(d.tau) + " tol=" + format_double(d.tol) + " eps=" + eps +
         " radius=" + std::to_string(d.radius) + " stability_tol=" + format_double(d.stability_tol) +
         " series_rel_tol=" + format_double(d.series_rel_tol) +
         " series_max_terms=" + std::to_string(d.series_max_terms) + " exp_nmax=" + std::to_string(d.exp_nmax) +
         " exp_branches=" + std::to_string(d.exp_branches) + " exp_beam=" + std::to_string(d.exp_beam);
}

}  // namespace shiftthermo
