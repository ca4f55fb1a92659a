#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bst/boundary.hpp"
#include "bst/error.hpp"

using namespace bst;
using std::numbers::pi;

namespace {

BoundarySpec perturbed(std::initializer_list<FourierMode> extra) {
  BoundarySpec spec;
  spec.radial_coeffs = {{0, 1.0, 0.0}};
  spec.radial_coeffs.insert(spec.radial_coeffs.end(), extra);
  return spec;
}

double polygon_perimeter(const BoundaryGeometry& geom, int n) {
  double total = 0.0;
  Vec2 prev = geom.point(0.0);
  for (int i = 1; i <= n; ++i) {
    const Vec2 next = geom.point(2.0 * pi * i / n);
    total += (next - prev).norm();
    prev = next;
  }
  return total;
}

BoundarySpec random_symmetric_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-0.025, 0.025);
  BoundarySpec spec = perturbed({});
  for (int f = 2; f <= 8; f += 2) spec.radial_coeffs.push_back({f, coeff(rng), coeff(rng)});
  spec.rotation = std::uniform_real_distribution<double>(0.0, pi)(rng);
  return spec;
}

}  // namespace

TEST_CASE("unit circle geometry") {
  const auto geom = validate_spec(BoundarySpec::circle(1.0));
  CHECK(geom.perimeter() == doctest::Approx(2.0 * pi).epsilon(1e-14));
  CHECK(geom.curvature_min() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(geom.curvature_max() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(geom.convex());
}

TEST_CASE("perimeter agrees with a dense polygon") {
  const auto geom = validate_spec(perturbed({{2, 0.1, 0.0}}));
  // Polygon error is even in 1/n; one Richardson step removes the n^-2 term.
  const double coarse = polygon_perimeter(geom, 1 << 15);
  const double fine = polygon_perimeter(geom, 1 << 16);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  CHECK(std::abs(geom.perimeter() - extrapolated) < 1e-10);
  CHECK(geom.convex());
}

TEST_CASE("invalid boundaries are rejected") {
  CHECK_THROWS_AS(validate_spec(perturbed({{3, 0.1, 0.0}})), Error);
  try {
    validate_spec(perturbed({{3, 0.1, 0.0}}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OddModePresent);
  }
  try {
    validate_spec(perturbed({{2, 1.5, 0.0}}));
    FAIL("expected NotStarShaped");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotStarShaped);
  }
  try {
    validate_spec(BoundarySpec{});
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
  try {
    validate_spec(perturbed({{2, std::nan(""), 0.0}}));
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
}

TEST_CASE("arclength and angle are inverse lifts") {
  const auto geom = validate_spec(perturbed({{2, 0.05, 0.0}, {4, 0.01, 0.004}}));
  for (double theta : {-3.0, -0.4, 0.0, 0.7, 2.5, 6.0, 9.1}) {
    const double s = geom.arclength_of_angle(theta);
    CHECK(geom.angle_of_arclength(s) == doctest::Approx(theta).epsilon(1e-13));
  }
  CHECK(geom.arclength_of_angle(2.0 * pi) == doctest::Approx(geom.perimeter()).epsilon(1e-14));
  CHECK(geom.arclength_of_angle(pi) == doctest::Approx(0.5 * geom.perimeter()).epsilon(1e-14));
}

TEST_CASE("ellipse top vertex jet") {
  const auto geom = validate_spec(BoundarySpec::ellipse(2.0, 1.0));
  const GraphJet jet = extract_graph_jet(geom, 0.5 * pi, 0.0, 8);
  // f(x) = sqrt(1 - x^2/4) = 1 - x^2/8 - x^4/128 - x^6/1024 - ...
  CHECK(jet[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(jet[1]) < 1e-13);
  CHECK(jet[2] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(std::abs(jet[3]) < 1e-12);
  CHECK(jet[4] == doctest::Approx(-3.0 / 16.0).epsilon(1e-11));
  CHECK(jet[6] == doctest::Approx(-720.0 / 1024.0).epsilon(1e-10));
}

TEST_CASE("circle top vertex jet") {
  const auto geom = validate_spec(BoundarySpec::circle(1.0));
  const GraphJet jet = extract_graph_jet(geom, 0.5 * pi, 6);
  CHECK(jet[2] == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(jet[4] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(jet[6] == doctest::Approx(-45.0).epsilon(1e-11));
}

TEST_CASE("opposite jets obey the central symmetry relations") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  for (int trial = 0; trial < 20; ++trial) {
    const auto geom = validate_spec(random_symmetric_spec(rng));
    const double theta = angle(rng);
    const double rot = vertical_frame_rotation(geom, theta);
    const GraphJet plus = extract_graph_jet(geom, theta, rot, 10);
    const GraphJet minus = extract_graph_jet(geom, theta + pi, rot, 10);
    for (std::size_t k = 0; k <= 10; ++k) {
      const double expected = k % 2 == 0 ? -plus[k] : plus[k];
      CHECK(std::abs(minus[k] - expected) <= 1e-10 * std::max(1.0, std::abs(plus[k])));
    }
  }
}

TEST_CASE("jets are stable under truncation order") {
  const auto geom = validate_spec(perturbed({{2, 0.05, 0.0}, {4, 0.01, 0.004}}));
  const GraphJet low = extract_graph_jet(geom, 1.1, 8);
  const GraphJet high = extract_graph_jet(geom, 1.1, 16);
  for (std::size_t k = 0; k <= 8; ++k) CHECK(low[k] == doctest::Approx(high[k]).epsilon(1e-13));
}

TEST_CASE("curvature matches the jet") {
  const auto geom = validate_spec(perturbed({{2, 0.05, 0.0}, {4, 0.01, 0.004}}));
  for (double theta : {0.3, 1.2, 2.9}) {
    const GraphJet jet = extract_graph_jet(geom, theta, 4);
    const double kappa = -jet[2] / std::pow(1.0 + jet[1] * jet[1], 1.5);
    CHECK(kappa == doctest::Approx(geom.curvature_at_angle(theta)).epsilon(1e-12));
  }
}
