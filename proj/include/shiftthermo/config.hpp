#pragma once

// Every algorithm default in one place. The CLI exposes each entry as a flag
// and as an environment variable SHIFTTHERMO_<NAME>; flags win over the
// environment, which wins over these values.

#include <cstddef>
#include <string>
#include <vector>

namespace shiftthermo {

struct Defaults {
  std::size_t N = 60;                      // pressure horizon
  std::size_t depth = 3;                   // D, cylinder depth of constructed measures
  double tau = 1e-9;                       // zero-pressure tolerance of the core route
  double tol = 1e-3;                       // KMS bisection width
  std::vector<double> eps{0.1, 0.05, 0.025};
  int radius = 4;                          // explored region of infinite graphs
  double stability_tol = 1e-6;             // ratio-limit spread allowed along the sequence
  double series_rel_tol = 1e-14;
  std::size_t series_max_terms = 10000;
  std::size_t exp_nmax = 6;
  long exp_branches = 50;
  std::size_t exp_beam = 100000;
};

inline const Defaults kDefaults{};

// "key=value" pairs of every entry, space separated, prefixed by the version.
std::string fingerprint(const Defaults& d);

std::string version_string();

}  // namespace shiftthermo
