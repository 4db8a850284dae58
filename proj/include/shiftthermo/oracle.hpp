#pragma once

// Brute-force references for small instances. Nothing here goes through the
// sweep, the pressure estimators or the conformal constructions: values come
// from explicit enumeration, dense matrices and closed forms.

#include <string>
#include <vector>

#include "shiftthermo/potential.hpp"
#include "shiftthermo/symbolic.hpp"

namespace shiftthermo::oracle {

struct OracleResult {
  std::string method;    // enumeration | perron | moran | closed-form
  double value = 0.0;
  std::string instance;
};

// L^n_phi f (x) by listing every path p of length n with p.x in the support of f.
double enumerate_Ln(const Potential& phi, const GraphModel& g, const CylinderFunction& f, const BasePoint& x,
                    std::size_t n);

// sum of e^{phi_n(c^infinity)} over cycles c of length n at s(mu) with c^infinity in Z(mu).
double periodic_sum(const Potential& phi, const GraphModel& g, const FinitePath& mu, std::size_t n);

struct Perron {
  double log_radius = 0.0;
  std::vector<FinitePath> states;  // all paths of length max(k, 1)
  std::vector<double> vector;      // v = rho^{-1} D A v, normalized at `normalize_at`
  int period = 1;
};

// Dense state matrix T[w][w'] = e^{-beta phi(w)} for w -> w' (w' = sigma w extended by
// one edge) on a finite irreducible graph; v solves T v = rho v, so v(w) is the
// mass of Z(w) for the eigenmeasure of -beta phi - log rho.
Perron perron(const GraphModel& g, const Potential& phi, double beta, const FinitePath& normalize_at);

// beta with sum_i w_i^beta = 1, each w_i in (0, 1), by bisection to 1e-12.
double moran_solve(const std::vector<double>& weights);

// Closed forms on the Ladder with up/down values (t_u, t_d).
double ladder_pressure(double t_up, double t_down, double beta);
// m([n]) for the (beta phi)-conformal measure with m([0]) = 1, from
// m([n]) = w_u m([n+1]) + w_d m([0]); the branch that stays bounded by the
// resolvent limit (fixed route) is the one with m([n]) growing like w_u^{-n}.
double ladder_vertex_mass(double t_up, double t_down, double beta, int n);

// Core with rays: m([ray r, level n]) / m([target]) = exp(-beta (t_1 + ... + t_n)).
double ray_mass(const std::vector<double>& ray_levels, double beta, int level);

// L^2(1)(x0) for lambda e^z with every branch |k| <= K at both levels and a
// crude integral bound on the rest: returns {lower, upper}.
std::pair<double, double> exp_two_level(double lambda, double beta, long K);

// Every reference value used by the test suite, one per row.
std::vector<OracleResult> reference_table();

}  // namespace shiftthermo::oracle
