#include <cmath>

#include "doctest.h"
#include "frozen_oracle.hpp"
#include "shiftthermo/conformal.hpp"
#include "shiftthermo/oracle.hpp"

using namespace shiftthermo;

namespace {
const auto kLadder = GraphModel::ladder();
const auto kH = CylinderFunction::indicator(FinitePath::vertex(0));
}  // namespace

TEST_CASE("diverging sequences escape") {
  const auto seq = diverging_sequence(kLadder, kH, 6);
  REQUIRE(seq.points.size() == 6);
  for (std::size_t i = 1; i < seq.escape.size(); ++i) CHECK(std::llabs(seq.escape[i]) > std::llabs(seq.escape[i - 1]));
}

TEST_CASE("fixed route at beta = 2 hits the recursion solution") {
  const auto r = construct_limit(Potential::constant(std::log(2.0)), 2.0, kLadder, kH, ConstructOptions{});
  for (int n = 0; n <= 2; ++n) {
    const double want = frozen::get("ladder.const_log2.beta2.m" + std::to_string(n));
    CHECK(std::fabs(r.measure.value(FinitePath::vertex(n)) - want) <= 1e-9 * want);
  }
  CHECK(r.measure.value(FinitePath::from_edges(kLadder, {0})) ==
        doctest::Approx(frozen::get("ladder.const_log2.beta2.m_u0")).epsilon(1e-9));
  CHECK(r.residuals.max_relative <= 1e-6);
  CHECK(r.measure.additivity(kLadder).max_relative <= 1e-9);
}

TEST_CASE("verify flags a perturbed measure") {
  const auto phi = Potential::constant(std::log(2.0));
  auto r = construct_limit(phi, 2.0, kLadder, kH, ConstructOptions{});
  auto m = r.measure;
  m.set(FinitePath::vertex(1), 3.3);
  CHECK(verify(m, phi, 2.0, kLadder).max_relative > 1e-3);
}

TEST_CASE("critical limit and refusal") {
  const auto phi = Potential::constant(std::log(2.0));
  const auto r = construct_limit(phi, 1.0, kLadder, kH, ConstructOptions{});
  for (int n = 0; n <= 4; ++n) {
    const double v = r.measure.value(FinitePath::vertex(n));
    CHECK(v >= 0.95);
    CHECK(v <= 1.05);
  }
  try {
    construct_limit(phi, 0.5, kLadder, kH, ConstructOptions{});
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PressurePositive);
    CHECK(is_refusal(e.code()));
  }
}

TEST_CASE("eigenmeasure threshold") {
  const auto zero = Potential::constant(0.0);
  CHECK_NOTHROW(eigenmeasure(zero, std::log(2.0), kLadder, kH, ConstructOptions{}));
  const auto r = eigenmeasure(zero, 1.0, kLadder, kH, ConstructOptions{});
  CHECK(r.residuals.max_relative <= 1e-6);
  try {
    eigenmeasure(zero, 0.5, kLadder, kH, ConstructOptions{});
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BelowThreshold);
  }
}

TEST_CASE("core spectrum against the dense Perron oracle") {
  const auto g = GraphModel::explicit_finite({{0, 0, 0}, {1, 0, 1}, {2, 1, 0}});
  const auto phi = Potential::table(2, {{{0, 0}, 0.1}, {{0, 1}, 0.3}, {{1, 2}, -0.2}, {{2, 0}, 0.5}, {{2, 1}, 0.0}});
  const auto cs = core_spectrum(phi, 1.0, g);
  const auto pf = oracle::perron(g, phi, 1.0, FinitePath::vertex(0));
  CHECK(std::fabs(cs.log_radius - pf.log_radius) <= 1e-10 * std::max(1.0, std::fabs(pf.log_radius)));
}

TEST_CASE("core extension along rays") {
  const auto g = GraphModel::core_with_inward_rays({{0, 0, 0}, {1, 0, 0}}, 1);
  const auto phi = Potential::core_ray({{0, std::log(2.0)}, {1, std::log(2.0)}}, {1.0, 2.0});
  const auto r = extend_from_core(g, phi, 1.0, 3, 3);
  CHECK(std::fabs(r.measure.value(FinitePath::vertex(g.ray_vertex(0, 1))) - frozen::get("core.ray_level1")) <= 1e-9);
  CHECK(std::fabs(r.measure.value(FinitePath::vertex(g.ray_vertex(0, 2))) - frozen::get("core.ray_level2")) <= 1e-9);
  CHECK(r.residuals.max_relative <= 1e-9);
  // two loops of weight 1/2 each: the core measure splits evenly
  CHECK(r.measure.value(FinitePath::from_edges(g, {0})) ==
        doctest::Approx(frozen::get("two_loops_half.m_edge0")).epsilon(1e-9));

  const auto off = Potential::core_ray({{0, std::log(3.0)}, {1, std::log(3.0)}}, {1.0, 2.0});
  try {
    extend_from_core(g, off, 1.0, 3, 3);
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PressureNotZero);
  }
}
