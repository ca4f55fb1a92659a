#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bst/bouncing_ball.hpp"
#include "bst/error.hpp"

using namespace bst;
using std::numbers::pi;

namespace {

BoundarySpec generic_spec() {
  BoundarySpec spec;
  spec.radial_coeffs = {{0, 1.0, 0.0}, {2, 0.05, 0.0}, {4, 0.01, 0.004}};
  return spec;
}

}  // namespace

TEST_CASE("ellipse bouncing balls and their stability") {
  const auto geom = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const auto orbits = detect_bouncing_balls(geom);
  REQUIRE(orbits.size() == 2);
  const auto& major = orbits[0];
  const auto& minor = orbits[1];
  CHECK(major.theta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(minor.theta == doctest::Approx(0.5 * pi).epsilon(1e-12));
  CHECK(major.L == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(minor.L == doctest::Approx(2.0).epsilon(1e-13));

  const StabilityData s_minor = poincare_map(geom, minor);
  CHECK(s_minor.kind == StabilityKind::Elliptic);
  CHECK(std::abs(s_minor.trace + 1.0) < 1e-6);
  CHECK(s_minor.alpha == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-6));
  CHECK(std::abs(s_minor.det - 1.0) < 1e-6);
  CHECK(s_minor.jet_trace == doctest::Approx(-1.0).epsilon(1e-12));

  const StabilityData s_major = poincare_map(geom, major);
  CHECK(s_major.kind == StabilityKind::Hyperbolic);
  CHECK(std::abs(std::cosh(0.5 * s_major.alpha) - 7.0) < 1e-6);
  CHECK(s_major.jet_trace == doctest::Approx(194.0).epsilon(1e-12));
  CHECK(std::abs(s_major.det - 1.0) < 1e-6);
}

TEST_CASE("vertex jets at a bouncing ball") {
  const auto geom = validate_spec(generic_spec());
  for (const auto& bb : detect_bouncing_balls(geom)) {
    CHECK(bb.orthogonality < 1e-12);
    CHECK(bb.plus[0] == doctest::Approx(0.5 * bb.L).epsilon(1e-13));
    CHECK(std::abs(bb.plus[1]) < 1e-12);
    for (std::size_t k = 0; k <= bb.plus.order(); ++k) {
      const double expected = k % 2 == 0 ? -bb.plus[k] : bb.plus[k];
      CHECK(std::abs(bb.minus[k] - expected) <= 1e-10 * std::max(1.0, std::abs(bb.plus[k])));
    }
  }
}

TEST_CASE("circle has a degenerate family of diameters") {
  const auto geom = validate_spec(BoundarySpec::circle(1.0));
  const auto orbits = detect_bouncing_balls(geom);
  REQUIRE(orbits.size() == 1);
  CHECK(orbits[0].degenerate_family);
  CHECK_THROWS_AS(poincare_map(geom, orbits[0]), Error);
}

TEST_CASE("det(I - P^r) from the angle and from the matrix") {
  const auto geom = validate_spec(generic_spec());
  for (const auto& bb : detect_bouncing_balls(geom)) {
    const StabilityData s = poincare_map(geom, bb);
    CHECK(s.trace == doctest::Approx(s.jet_trace).epsilon(1e-6));
    for (int r = 1; r <= 3; ++r)
      CHECK(s.det_I_minus_P(r) == doctest::Approx(s.det_I_minus_P_matrix(r)).epsilon(1e-5));
  }
}

TEST_CASE("curvature branches") {
  const auto [fp, fm] = curvature_branches(2.0 * pi / 3.0, StabilityKind::Elliptic, 2.0);
  CHECK(fp == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(fm == doctest::Approx(-0.75).epsilon(1e-14));
  const auto [hp, hm] = curvature_branches(2.0 * std::acosh(7.0), StabilityKind::Hyperbolic, 4.0);
  CHECK(hp == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(hm == doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("domain conditions on the ellipse minor axis") {
  const auto geom = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const auto orbits = detect_bouncing_balls(geom);
  const auto report = check_domain_conditions(geom, orbits[1], 4);
  CHECK(report.conditions[0].passed);
  CHECK_FALSE(report.conditions[1].passed);
  CHECK_FALSE(report.conditions[2].passed);
  CHECK_FALSE(report.conditions[3].passed);
  CHECK_FALSE(report.passed);
}

TEST_CASE("domain conditions on a generic domain") {
  const auto geom = validate_spec(generic_spec());
  bool any = false;
  for (const auto& bb : detect_bouncing_balls(geom)) any = any || check_domain_conditions(geom, bb, 4).passed;
  CHECK(any);
}
