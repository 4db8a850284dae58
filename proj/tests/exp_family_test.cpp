#include <cmath>

#include "doctest.h"
#include "frozen_oracle.hpp"
#include "shiftthermo/exp_family.hpp"

using namespace shiftthermo;

TEST_CASE("repelling fixed point") {
  for (double lambda : {0.05, 0.2, 0.3}) {
    const double x0 = repelling_fixed_point(lambda);
    CHECK(lambda * std::exp(x0) == doctest::Approx(x0).epsilon(1e-12));
    CHECK(x0 > 1.0);  // the attracting one lies below 1
  }
}

TEST_CASE("branch sums and tails") {
  const double lambda = 0.2, beta = 2.0;
  const double x0 = repelling_fixed_point(lambda);
  const auto small = branch_sum(lambda, {x0, 0.0}, beta, 10);
  const auto large = branch_sum(lambda, {x0, 0.0}, beta, 1000);
  CHECK(small.value < large.value);
  CHECK(large.value <= small.value + small.tail_bound);
  CHECK(one_sided_tail(10.0, 1.0, beta) > 0.0);
  CHECK(a_beta_bound(lambda, beta) >= large.value);
}

TEST_CASE("envelopes bracket the two-level oracle") {
  ExpOptions opt;
  opt.n_max = 3;
  opt.K = 30;
  const auto r = exp_pressure(0.2, 2.0, opt);
  const double lo = std::exp(r.log_lo[2]), hi = std::exp(r.log_hi[2]);
  // both are valid brackets of L^2(1)(x0), so they must overlap
  CHECK(lo <= frozen::get("exp.lambda0.2.beta2.L2_upper"));
  CHECK(hi >= frozen::get("exp.lambda0.2.beta2.L2_lower"));
  CHECK(r.estimate.lo <= r.estimate.point);
  CHECK(r.estimate.point <= r.estimate.hi);
  CHECK(r.estimate.method == PressureMethod::ExpFamily);
}

TEST_CASE("envelope tables are monotone in a") {
  ExpOptions opt;
  const auto env = subtree_envelope(0.2, 1.6, 2, opt);
  for (std::size_t m = 0; m <= 2; ++m) {
    for (double a : {3.0, 5.0, 20.0}) {
      CHECK(env.lower(m, a) <= env.upper(m, a));
      CHECK(env.upper(m, a * 2) <= env.upper(m, a));
    }
  }
}

TEST_CASE("serial and parallel trees agree") {
  ExpOptions opt;
  opt.n_max = 3;
  opt.K = 20;
  const auto p = exp_pressure(0.2, 1.6, opt);
  opt.exec = Exec::Serial;
  const auto s = exp_pressure(0.2, 1.6, opt);
  CHECK(p.log_lo == s.log_lo);
  CHECK(p.log_hi == s.log_hi);
}
