#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "bst/billiard.hpp"
#include "bst/error.hpp"

using namespace bst;
using std::numbers::pi;

namespace {

BoundarySpec generic_spec() {
  BoundarySpec spec;
  spec.radial_coeffs = {{0, 1.0, 0.0}, {2, 0.05, 0.0}, {4, 0.01, 0.004}};
  return spec;
}

BoundarySpec cos2_spec(double eps) {
  BoundarySpec spec;
  spec.radial_coeffs = {{0, 1.0, 0.0}, {2, eps, 0.0}};
  return spec;
}

std::vector<double> lengths(const std::vector<PeriodicOrbit>& orbits) {
  std::vector<double> out;
  for (const auto& o : orbits) out.push_back(o.length);
  std::sort(out.begin(), out.end());
  return out;
}

OrbitSearchConfig quick(int starts = 24) {
  OrbitSearchConfig config;
  config.starts_per_winding = starts;
  return config;
}

}  // namespace

TEST_CASE("length functional on the circle") {
  const auto geom = validate_spec(BoundarySpec::circle(1.0));
  const auto two = length_functional(geom, {{0.3, 0.3 + pi}});
  CHECK(two.value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(two.gradient.norm() < 1e-13);

  const auto three = length_functional(geom, {{0.1, 0.1 + 2 * pi / 3, 0.1 + 4 * pi / 3}});
  CHECK(three.value == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-14));
  CHECK(three.gradient.norm() < 1e-13);

  CHECK_THROWS_AS(length_functional(geom, {{1.0, 1.0, 2.0}}), Error);
}

TEST_CASE("gradient and Hessian match finite differences") {
  const auto geom = validate_spec(generic_spec());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  const double P = geom.perimeter();
  for (int q : {2, 3, 5}) {
    ConfigurationPoint x;
    for (int j = 0; j < q; ++j) x.s.push_back(P * j / q + jitter(rng));
    const auto eval = length_functional(geom, x);
    const double h = 1e-5;
    for (int i = 0; i < q; ++i) {
      ConfigurationPoint up = x, down = x;
      up.s[i] += h;
      down.s[i] -= h;
      const auto eu = length_functional(geom, up);
      const auto ed = length_functional(geom, down);
      CHECK(std::abs((eu.value - ed.value) / (2 * h) - eval.gradient[i]) < 1e-7);
      const Eigen::VectorXd column = (eu.gradient - ed.gradient) / (2 * h);
      CHECK((column - eval.hessian.col(i)).cwiseAbs().maxCoeff() < 1e-6);
    }
    CHECK((eval.hessian - eval.hessian.transpose()).norm() < 1e-12);
  }
}

TEST_CASE("billiard map on the circle") {
  const auto geom = validate_spec(BoundarySpec::circle(1.0));
  const PhasePoint diameter = billiard_map(geom, {0.4, 0.5 * pi});
  CHECK(diameter.s == doctest::Approx(0.4 + pi).epsilon(1e-12));
  CHECK(diameter.phi == doctest::Approx(0.5 * pi).epsilon(1e-12));

  const PhasePoint third = billiard_map(geom, {1.0, pi / 3});
  CHECK(third.s == doctest::Approx(1.0 + 2 * pi / 3).epsilon(1e-12));
  CHECK(third.phi == doctest::Approx(pi / 3).epsilon(1e-12));

  CHECK_THROWS_AS(billiard_map(geom, {0.0, 1e-10}), Error);
}

TEST_CASE("billiard map on the ellipse minor axis") {
  const auto geom = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const double s_top = geom.arclength_of_angle(0.5 * pi);
  const PhasePoint next = billiard_map(geom, {s_top, 0.5 * pi});
  const Vec2 landing = geom.at_arclength(next.s).position;
  CHECK(landing.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(landing.y() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(next.phi == doctest::Approx(0.5 * pi).epsilon(1e-12));
}

TEST_CASE("billiard map preserves area in (s, cos phi)") {
  const auto geom = validate_spec(generic_spec());
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> s_dist(0.0, geom.perimeter());
  std::uniform_real_distribution<double> u_dist(-0.8, 0.8);
  const double h = 1e-5;
  auto map = [&](double s, double u) {
    const PhasePoint y = billiard_map(geom, {s, std::acos(u)});
    return Eigen::Vector2d(y.s, std::cos(y.phi));
  };
  for (int trial = 0; trial < 10; ++trial) {
    const double s = s_dist(rng), u = u_dist(rng);
    Eigen::Matrix2d jac;
    jac.col(0) = (map(s + h, u) - map(s - h, u)) / (2 * h);
    jac.col(1) = (map(s, u + h) - map(s, u - h)) / (2 * h);
    CHECK(std::abs(jac.determinant() - 1.0) < 1e-6);
  }
}

TEST_CASE("ellipse two-bounce orbits are the axes") {
  const auto geom = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const auto result = find_orbits(geom, 2, std::nullopt, quick());
  REQUIRE(result.orbits.size() == 2);
  const auto ls = lengths(result.orbits);
  CHECK(ls[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(ls[1] == doctest::Approx(8.0).epsilon(1e-12));
  for (const auto& o : result.orbits) {
    CHECK(o.nondegenerate);
    CHECK(o.gradient_norm <= 1e-11 * geom.perimeter());
  }
}

TEST_CASE("circle three-bounce family is flagged degenerate") {
  const auto geom = validate_spec(BoundarySpec::circle(1.0));
  const auto result = find_orbits(geom, 3, 1, quick());
  REQUIRE(result.orbits.size() == 1);
  CHECK(result.orbits[0].degenerate_family);
  CHECK(result.orbits[0].length == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("axes of a cos 2 theta perturbation") {
  const auto geom = validate_spec(cos2_spec(0.05));
  const auto result = find_orbits(geom, 2, std::nullopt, quick());
  REQUIRE(result.orbits.size() == 2);
  const auto ls = lengths(result.orbits);
  CHECK(ls[0] == doctest::Approx(3.8).epsilon(1e-12));
  CHECK(ls[1] == doctest::Approx(4.2).epsilon(1e-12));
  for (const auto& o : result.orbits) CHECK(o.nondegenerate);
}

TEST_CASE("circle length spectrum") {
  const auto geom = validate_spec(BoundarySpec::circle(1.0));
  const auto spectrum = length_spectrum(geom, 5, 1e-9, quick());
  std::vector<double> expected;
  for (int q = 2; q <= 5; ++q)
    for (int p = 1; 2 * p <= q; ++p) expected.push_back(2.0 * q * std::sin(p * pi / q));
  std::sort(expected.begin(), expected.end());
  REQUIRE(spectrum.entries.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::abs(spectrum.entries[i].length - expected[i]) < 1e-8);
    CHECK(spectrum.entries[i].multiplicity == 1);
    CHECK(spectrum.entries[i].orbits.front().degenerate_family);
  }
}

TEST_CASE("ellipse spectrum up to two bounces") {
  const auto geom = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const auto spectrum = length_spectrum(geom, 2, 1e-9, quick());
  REQUIRE(spectrum.entries.size() == 2);
  CHECK(spectrum.entries[0].length == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(spectrum.entries[1].length == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(spectrum.entries[0].multiplicity == 1);
  CHECK(spectrum.entries[1].multiplicity == 1);
}

TEST_CASE("spectrum is stable when the start count doubles") {
  const auto geom = validate_spec(generic_spec());
  const auto base = length_spectrum(geom, 5, 1e-9, quick(24));
  const auto dense = length_spectrum(geom, 5, 1e-9, quick(48));
  REQUIRE(base.entries.size() == dense.entries.size());
  for (std::size_t i = 0; i < base.entries.size(); ++i) {
    CHECK(std::abs(base.entries[i].length - dense.entries[i].length) < 1e-9);
    CHECK(base.entries[i].multiplicity == dense.entries[i].multiplicity);
  }
}

TEST_CASE("orbit search is independent of the worker count") {
  const auto geom = validate_spec(generic_spec());
  OrbitSearchConfig one = quick();
  one.threads = 1;
  OrbitSearchConfig many = quick();
  many.threads = 4;
  const auto a = find_orbits(geom, 5, std::nullopt, one);
  const auto b = find_orbits(geom, 5, std::nullopt, many);
  REQUIRE(a.orbits.size() == b.orbits.size());
  for (std::size_t i = 0; i < a.orbits.size(); ++i) {
    CHECK(a.orbits[i].length == b.orbits[i].length);
    CHECK(a.orbits[i].config.s == b.orbits[i].config.s);
  }
}

TEST_CASE("condition 4 on the ellipse reports the collision") {
  const auto geom = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const auto report = check_condition4(geom, 2.0, 4, 1e-9, quick());
  CHECK_FALSE(report.passed);
  CHECK(report.multiplicity_2L == 1);
  CHECK(report.multiplicity_4L == 2);
  CHECK(report.perimeter_distinct);
  CHECK_FALSE(report.violations.empty());
  CHECK_FALSE(report.collisions.empty());
}

TEST_CASE("condition 4 holds for a cos 2 theta perturbation") {
  const auto geom = validate_spec(cos2_spec(0.05));
  for (double L : {1.9, 2.1}) {
    const auto report = check_condition4(geom, L, 6, 1e-9, quick());
    CHECK(report.passed);
    CHECK(report.multiplicity_2L == 1);
    CHECK(report.lazutkin_holds);
    CHECK(report.heuristic_bounce_bound > 0.0);
  }
}

TEST_CASE("Lazutkin bounds on every link") {
  const auto geom = validate_spec(generic_spec());
  const auto spectrum = length_spectrum(geom, 6, 1e-9, quick());
  int links = 0;
  for (const auto& e : spectrum.entries)
    for (const auto& o : e.orbits)
      for (const auto& link : lazutkin_links(geom, o)) {
        ++links;
        CHECK(link.symmetric_holds);
      }
  CHECK(links > 0);
}
