#pragma once

// Pressure of -beta log|z| for E_lambda(z) = lambda e^z, 0 < lambda < 1/e, from
// truncated inverse-branch trees at the repelling real fixed point.
//
// Every inverse branch of a point x is y_k = Log(x/lambda) + 2 pi i k, so all
// preimages share Re y = log|x/lambda| and only the imaginary part moves.
// Starting from the real fixed point x0 every tree node y has
// a(y) = log|y/lambda| >= x0.

#include <complex>
#include <vector>

#include "shiftthermo/kernels.hpp"
#include "shiftthermo/pressure.hpp"

namespace shiftthermo {

// Larger root of lambda e^x = x.
double repelling_fixed_point(double lambda);

struct BranchSum {
  double value = 0.0;
  double tail_bound = 0.0;
};

// sum_{|k| <= K} |y_k(x)|^{-beta} and a bound on the omitted |k| > K terms.
BranchSum branch_sum(double lambda, std::complex<double> x, double beta, long K);

// Bound on sum_{j >= 0} (a^2 + (s0 + 2 pi j)^2)^{-beta/2} for s0 >= 0.
double one_sided_tail(double s0, double a, double beta);

// sup over the Julia set of sum_y |y|^{-beta}, using J inside {Re z >= x0}.
double a_beta_bound(double lambda, double beta);

struct ExpOptions {
  std::size_t n_max = 6;
  long K = 50;
  std::size_t beam = 100000;
  // Envelope tables for discarded subtrees: geometric a-grid ratio, angle
  // cells on (-pi, pi], and explicit branches before the blocked tail.
  double grid_ratio = 0.01;
  std::size_t grid_angles = 32;
  long grid_branches = 64;
  Exec exec = Exec::Parallel;
};

// Cell-wise bounds L_m(a) <= L^m(1)(y) <= U_m(a) over all y with a(y) in a cell.
// Both envelopes are nonincreasing in a, which makes cell values valid bounds.
struct SubtreeEnvelope {
  std::vector<double> edges;  // cell i is [edges[i], edges[i+1]); the last cell is unbounded
  std::vector<std::vector<double>> upper_rel, lower_rel;  // [m][cell], scaled
  std::vector<double> upper_log_scale, lower_log_scale;   // [m]

  std::size_t cell_of(double a) const;
  double upper(std::size_t m, double a) const;
  double lower(std::size_t m, double a) const;
};

SubtreeEnvelope subtree_envelope(double lambda, double beta, std::size_t depth, const ExpOptions& opt);

struct ExpPressure {
  PressureEstimate estimate;      // at n_max; sequence holds log(mid_n)/n
  std::vector<double> log_lo;     // log lower bound of L^n(1)(x0), n = 0..n_max
  std::vector<double> log_hi;     // log upper bound
  double x0 = 0.0;
  double a_beta = 0.0;
  double beam_fraction = 0.0;     // bracket width caused by the beam, relative to the lower bound
};

ExpPressure exp_pressure(double lambda, double beta, const ExpOptions& opt);

}  // namespace shiftthermo
