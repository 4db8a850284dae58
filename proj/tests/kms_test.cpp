#include <cmath>

#include "doctest.h"
#include "frozen_oracle.hpp"
#include "shiftthermo/kms.hpp"

using namespace shiftthermo;

TEST_CASE("kms regions by case") {
  const KmsOptions opt;
  const auto ladder = GraphModel::ladder();

  const auto zray = kms_region(Potential::constant(1.0), GraphModel::z_ray(), opt);
  CHECK(zray.case_tag == NwCase::Empty);
  CHECK(zray.region == KmsRegionKind::AllReal);
  CHECK(zray.contains(-5.0));

  const auto half = kms_region(Potential::constant(std::log(2.0)), ladder, opt);
  CHECK(half.region == KmsRegionKind::HalfLine);
  CHECK(std::fabs(half.beta0 - 1.0) <= 1e-3);
  CHECK(half.contains(3.0));
  CHECK_FALSE(half.contains(0.5));

  const auto moran = kms_region(Potential::ladder_up_down(std::log(2.0), std::log(4.0)), ladder, opt);
  CHECK(std::fabs(moran.beta0 - frozen::get("moran.2^-b+4^-b")) <= 1e-3);
  CHECK(moran.beta0_lo <= moran.beta0);
  CHECK(moran.beta0 <= moran.beta0_hi);

  const auto gauge = kms_region(Potential::constant(1.0), ladder, opt);
  CHECK(std::fabs(gauge.beta0 - frozen::get("moran.ladder_const1")) <= 1e-3);

  const auto core = GraphModel::core_with_inward_rays({{0, 0, 0}, {1, 0, 0}}, 1);
  const auto single = kms_region(Potential::core_ray({{0, std::log(2.0)}, {1, std::log(2.0)}}, {1.0, 2.0}), core, opt);
  CHECK(single.case_tag == NwCase::FiniteNonEmpty);
  CHECK(single.region == KmsRegionKind::Singleton);
  CHECK(std::fabs(single.beta0 - 1.0) <= 1e-3);
}

TEST_CASE("certificates outside the region are refused") {
  const auto ladder = GraphModel::ladder();
  const auto phi = Potential::constant(std::log(2.0));
  const auto region = kms_region(phi, ladder, KmsOptions{});
  const auto h = CylinderFunction::indicator(FinitePath::vertex(0));
  const auto ok = kms_certificate(region, 2.0, phi, ladder, h, ConstructOptions{});
  CHECK(ok.residuals.max_relative <= 1e-6);
  CHECK_THROWS_AS(kms_certificate(region, 0.5, phi, ladder, h, ConstructOptions{}), Error);
}
