#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>

#include "sphectra/radial_density.hpp"

using namespace sphectra;

namespace {

RadialDensity uniform_density() {
  RadialDensity d;
  d.breakpoints = {0.0, M_PI};
  d.values = {1.0, 1.0};
  d.floor = 1.0;
  return d;
}

}  // namespace

TEST_CASE("uniform density on S^2 reproduces the degree-one band") {
  const DensitySpectrum spec = solve_radial_density(2, uniform_density(), 3);
  CHECK(std::abs(spec.modes[0].mu) < 1e-9);
  for (int k = 1; k <= 3; ++k)
    CHECK(spec.mu_nontrivial(k) == Catch::Approx(2.0).margin(1e-6));
  CHECK(spec.mass == Catch::Approx(4.0 * M_PI).margin(1e-10));
  CHECK_FALSE(spec.truncation_warning);
}

TEST_CASE("uniform density on S^3") {
  const DensitySpectrum spec = solve_radial_density(3, uniform_density(), 4);
  for (int k = 1; k <= 4; ++k)
    CHECK(spec.mu_nontrivial(k) == Catch::Approx(3.0).margin(2e-6));
  CHECK(spec.mass == Catch::Approx(2.0 * M_PI * M_PI).margin(1e-9));
}

TEST_CASE("table density: mass six and the published eigenvalue") {
  const RadialDensity rho = rho_pl();
  CHECK(rho.mass(2) == Catch::Approx(6.0).margin(1e-3));
  const DensitySpectrum spec = solve_radial_density(2, rho, 3);
  CHECK(spec.mu_nontrivial(1) == Catch::Approx(2.213185).margin(2e-3));
}

TEST_CASE("cap-like density resolves the ball mode") {
  RadialDensity rho;
  rho.breakpoints = {0.0, 1.0, 1.005, M_PI};
  rho.values = {1.0, 1.0, 1e-6, 1e-6};
  rho.floor = 1e-6;
  const DensitySpectrum spec = solve_radial_density(2, rho, 8);
  const double ball = solve_ball_mode(2, 1.0).mu;

  // the spectrum contains the cap-localized degree-one mode
  double best = 1e300;
  for (const auto& m : spec.modes)
    if (m.ell == 1) best = std::min(best, std::abs(m.mu - ball));
  CHECK(best <= 0.02 * ball);

  // the essential floor admits genuine low modes living on the light region,
  // so the global first eigenvalue sits strictly below the ball value
  CHECK(spec.mu_nontrivial(1) < ball);
  CHECK(spec.mu_nontrivial(1) > 0.0);
}

TEST_CASE("density validation") {
  RadialDensity bad = uniform_density();
  bad.floor = 0.0;
  CHECK_THROWS_AS(solve_radial_density(2, bad, 1), std::invalid_argument);

  RadialDensity decreasing;
  decreasing.breakpoints = {0.0, 1.0, 0.5, M_PI};
  decreasing.values = {1.0, 1.0, 1.0, 1.0};
  decreasing.floor = 1.0;
  CHECK_THROWS_AS(decreasing.validate(), std::invalid_argument);

  RadialDensity overshoot = uniform_density();
  overshoot.values = {1.5, 1.0};
  CHECK_THROWS_AS(overshoot.validate_full_support(), std::invalid_argument);
}

TEST_CASE("shipped density file carries the table values") {
  const RadialDensity shipped =
      RadialDensity::load(std::string(SPHECTRA_SOURCE_DIR) + "/data/rho_pl.json");
  const RadialDensity builtin = rho_pl();
  REQUIRE(shipped.values.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(shipped.values[i] == builtin.values[i]);
  CHECK(shipped.floor == builtin.floor);
  CHECK(shipped.mass(2) == Catch::Approx(6.0).margin(1e-3));
  const DensitySpectrum spec = solve_radial_density(2, shipped, 1);
  CHECK(spec.mu_nontrivial(1) == Catch::Approx(2.213185).margin(2e-3));
}

TEST_CASE("density json round trip") {
  const RadialDensity rho = rho_pl();
  const std::string path = "rho_roundtrip.json";
  rho.save(path);
  const RadialDensity back = RadialDensity::load(path);
  REQUIRE(back.breakpoints.size() == rho.breakpoints.size());
  for (std::size_t i = 0; i < rho.breakpoints.size(); ++i) {
    CHECK(back.breakpoints[i] == rho.breakpoints[i]);
    CHECK(back.values[i] == rho.values[i]);
  }
  CHECK(back.floor == rho.floor);
  std::remove(path.c_str());
}

TEST_CASE("two-cap spectrum prefix") {
  const int n = 2;
  const double area = 3.0;
  const auto eigs = two_cap_spectrum(n, area, 2 * n + 1);
  CHECK(eigs[0] == 0.0);
  CHECK(eigs[1] == 0.0);
  const double ball = solve_ball_mode(n, radius_from_area(area, n)).mu;
  for (int i = 2; i < 2 + 2 * n; ++i) CHECK(eigs[i] == Catch::Approx(ball));
  CHECK_THROWS_AS(two_cap_spectrum(2, 2.0 * M_PI + 1.0, 1), std::domain_error);
  CHECK_THROWS_AS(two_cap_spectrum(2, 1.0, 50), std::invalid_argument);
}

TEST_CASE("spectrum csv export") {
  const DensitySpectrum spec = solve_radial_density(2, uniform_density(), 2);
  spec.write_csv("spec_smoke.csv");
  std::ifstream in("spec_smoke.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "index,ell,mu,residual");
  std::remove("spec_smoke.csv");
}
