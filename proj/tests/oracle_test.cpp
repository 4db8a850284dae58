#include <cmath>
#include <map>

#include "doctest.h"
#include "frozen_oracle.hpp"
#include "shiftthermo/oracle.hpp"

using namespace shiftthermo;

TEST_CASE("reference table reproduces the frozen record") {
  const auto rows = oracle::reference_table();
  REQUIRE(rows.size() == std::size(frozen::kOracle));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(rows[i].instance);
    CHECK(rows[i].instance == frozen::kOracle[i].name);
    const double want = frozen::kOracle[i].value;
    CHECK(std::fabs(rows[i].value - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
  }
}

TEST_CASE("enumeration on small shifts") {
  const auto full = GraphModel::weighted_full_shift(2);
  const auto one = CylinderFunction::indicator(FinitePath::vertex(0));
  // every vertex is 0 in the one-vertex full shift, so 1_[0] = 1
  const auto x = BasePoint::periodic(full, FinitePath::vertex(0), FinitePath::from_edges(full, {0}));
  for (std::size_t n = 0; n <= 6; ++n) {
    CHECK(oracle::enumerate_Ln(Potential::constant(0.0), full, one, x, n) == doctest::Approx(std::pow(2.0, n)));
  }
  // with phi = -log 2 the transfer operator fixes 1
  CHECK(oracle::enumerate_Ln(Potential::constant(-std::log(2.0)), full, one, x, 5) == doctest::Approx(1.0));
}

TEST_CASE("periodic sums on the golden mean are traces") {
  const auto g = GraphModel::explicit_finite({{0, 0, 0}, {1, 0, 1}, {2, 1, 0}});
  // loops at vertex 0 of length n follow the Fibonacci numbers
  const double want[] = {1, 2, 3, 5, 8, 13};
  for (std::size_t n = 1; n <= 6; ++n) {
    CHECK(oracle::periodic_sum(Potential::constant(0.0), g, FinitePath::vertex(0), n) == want[n - 1]);
  }
}

TEST_CASE("perron vector solves the eigen-equation") {
  const auto g = GraphModel::explicit_finite({{0, 0, 0}, {1, 0, 1}, {2, 1, 0}});
  const auto p = oracle::perron(g, Potential::constant(0.0), 1.0, FinitePath::vertex(0));
  CHECK(p.log_radius == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
  CHECK(p.period == 1);
  REQUIRE(p.states.size() == p.vector.size());
  // m([0]) = 1, m([1]) = m([0]) / rho since [1] has the single continuation 1 -> 0
  std::map<VertexId, double> mass;
  for (std::size_t i = 0; i < p.states.size(); ++i) mass[p.states[i].source()] += p.vector[i];
  CHECK(mass[0] == doctest::Approx(1.0));
  CHECK(mass[1] == doctest::Approx(std::exp(-p.log_radius)).epsilon(1e-10));
}

TEST_CASE("moran root") {
  const double b = oracle::moran_solve({0.5, 0.25});
  CHECK(std::pow(2.0, -b) + std::pow(4.0, -b) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(oracle::moran_solve({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("ladder closed forms satisfy the conformality recursion") {
  const double tu = std::log(2.0), td = std::log(4.0), beta = 1.5;
  const double wu = std::exp(-beta * tu), wd = std::exp(-beta * td);
  const double pressure = oracle::ladder_pressure(tu, td, beta);
  CHECK(pressure == doctest::Approx(std::log(wu + wd)));
  // recursion m_n = w_u m_{n+1} + w_d m_0 holds at pressure < 0
  const double b2 = 3.0;
  const double vu = std::exp(-b2 * tu), vd = std::exp(-b2 * td);
  for (int n = 0; n < 5; ++n) {
    const double lhs = oracle::ladder_vertex_mass(tu, td, b2, n);
    const double rhs = vu * oracle::ladder_vertex_mass(tu, td, b2, n + 1) + vd * oracle::ladder_vertex_mass(tu, td, b2, 0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("exp two-level bracket is ordered") {
  const auto [lo, hi] = oracle::exp_two_level(0.2, 2.0, 100);
  CHECK(lo > 0.0);
  CHECK(lo <= hi);
}
