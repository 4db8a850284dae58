#include <cmath>

#include "doctest.h"
#include "frozen_oracle.hpp"
#include "shiftthermo/oracle.hpp"
#include "shiftthermo/transfer.hpp"

using namespace shiftthermo;

namespace {
double rel(double a, double b) { return a == b ? 0.0 : std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }
}  // namespace

TEST_CASE("pointwise transfer matches frozen enumeration values") {
  const auto ladder = GraphModel::ladder();
  const auto x0 = BasePoint::periodic(ladder, FinitePath::vertex(0), FinitePath::from_edges(ladder, {1}));
  // L^4 1_[0] at a point over vertex 0 counts the loops of length 4 at 0
  const double v = apply_pointwise(Potential::constant(0.0), ladder, CylinderFunction::indicator(FinitePath::vertex(0)), x0, 4);
  CHECK(rel(v, frozen::get("ladder.loops_at_0.len4")) <= 1e-10);

  const auto full = GraphModel::weighted_full_shift(2);
  const auto x = BasePoint::periodic(full, FinitePath::vertex(0), FinitePath::from_edges(full, {0}));
  const double w = apply_pointwise(Potential::constant(0.0), full, CylinderFunction::indicator(FinitePath::vertex(0)), x, 3);
  CHECK(rel(w, frozen::get("full_shift2.L3_of_1")) <= 1e-10);
}

TEST_CASE("sweep agrees with the oracle on a depth-two potential") {
  const auto g = GraphModel::explicit_finite({{0, 0, 0}, {1, 0, 1}, {2, 1, 0}});
  const auto phi = Potential::table(2, {{{0, 0}, 0.1}, {{0, 1}, 0.3}, {{1, 2}, -0.2}, {{2, 0}, 0.5}, {{2, 1}, 0.0}});
  const auto x = BasePoint::periodic(g, FinitePath::vertex(0), FinitePath::from_edges(g, {1, 2}));
  CylinderFunction f(2);
  f.add(FinitePath::from_edges(g, {0, 0}), 1.5);
  f.add(FinitePath::from_edges(g, {1, 2}), 0.25);
  f.add(FinitePath::from_edges(g, {2, 1}), 2.0);
  const auto seq = iterate_sequence(phi, g, f, x, 8);
  REQUIRE(seq.size() == 9);
  for (std::size_t n = 0; n <= 8; ++n) {
    CAPTURE(n);
    const double want = oracle::enumerate_Ln(phi, g, f, x, n);
    CHECK(rel(seq[n].to_double(), want) <= 1e-10);
    CHECK(rel(apply_pointwise(phi, g, f, x, n), want) <= 1e-10);
  }
}

TEST_CASE("signed functions") {
  const auto g = GraphModel::ladder();
  auto f = CylinderFunction::indicator(FinitePath::vertex(0));
  f.add(FinitePath::vertex(1), -1.0);
  const auto x = BasePoint::greedy_ray(g, FinitePath::vertex(0));
  const auto phi = Potential::ladder_up_down(0.3, 0.7);
  auto abs_f = CylinderFunction::indicator(FinitePath::vertex(0));
  abs_f.add(FinitePath::vertex(1), 1.0);
  // the two halves cancel exactly here, so errors are measured against L^n |f|
  for (const auto& y : {x, BasePoint::greedy_ray(g, FinitePath::vertex(2))}) {
    for (std::size_t n = 1; n <= 6; ++n) {
      const double scale = oracle::enumerate_Ln(phi, g, abs_f, y, n);
      CHECK(std::fabs(apply_pointwise(phi, g, f, y, n) - oracle::enumerate_Ln(phi, g, f, y, n)) <= 1e-10 * scale);
    }
  }
  // at a point over 2 the first step sees only [1]
  const auto z = BasePoint::greedy_ray(g, FinitePath::vertex(2));
  CHECK(apply_pointwise(phi, g, f, z, 1) == doctest::Approx(-std::exp(0.3)));
}

TEST_CASE("functional form evaluates like the pointwise one") {
  const auto g = GraphModel::ladder();
  const auto phi = Potential::ladder_up_down(0.3, 0.7);
  CylinderFunction f(1);
  f.add(FinitePath::from_edges(g, {0}), 1.0);
  f.add(FinitePath::from_edges(g, {3}), 2.0);
  const auto lf = apply_functional(phi, g, f);
  for (VertexId v : {0, 1, 2, 3}) {
    const auto x = BasePoint::greedy_ray(g, FinitePath::vertex(v));
    CHECK(evaluate(g, lf, x) == doctest::Approx(apply_pointwise(phi, g, f, x, 1)).epsilon(1e-12));
  }
}

TEST_CASE("series are identical in serial and parallel") {
  const auto g = GraphModel::ladder();
  const auto phi = Potential::constant(std::log(2.0)).scaled(-2.0);
  const auto x = BasePoint::periodic(g, FinitePath::vertex(0), FinitePath::from_edges(g, {1}));
  std::vector<FinitePath> cyl;
  for (std::size_t d = 0; d <= 2; ++d) {
    for (auto& p : paths_from(g, 0, d)) cyl.push_back(p);
  }
  SeriesOptions opt;
  const auto s = cylinder_series(phi, g, cyl, x, opt, Exec::Serial);
  const auto p = cylinder_series(phi, g, cyl, x, opt, Exec::Parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].log_sum == p[i].log_sum);
    CHECK(s[i].terms == p[i].terms);
    CHECK(s[i].converged);
  }
  CHECK(std::isfinite(s[0].log_sum));
  CHECK(s[0].decay_ratio == doctest::Approx(0.5).epsilon(0.05));
}
