#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sphectra/rng.hpp"
#include "sphectra/sphere_core.hpp"

using namespace sphectra;

namespace {

// coordinate distance: geodesic_distance bottoms out near sqrt(eps) because
// of acos, so exact-equality checks compare embeddings instead
template <int N>
double cdist(const sphectra::UnitVec<N>& a, const sphectra::UnitVec<N>& b) {
  return sphectra::norm<N>(sphectra::sub<N>(a.coords(), b.coords()));
}

// independent oracle: invert the n=2 closed form by plain bisection
double bisect_radius_n2(double area) {
  double lo = 0.0, hi = M_PI;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (2.0 * M_PI * (1.0 - std::cos(mid)) < area ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("reflection basics") {
  const auto a = UnitVec2::axis(0);
  const auto z = UnitVec2(Vec3{1.0, 1.0, 0.0});

  const auto ra = reflect(a, a);
  CHECK(dot(ra, a) == Catch::Approx(-1.0).margin(1e-14));

  const auto perp = UnitVec2::axis(1);
  const auto rp = reflect(a, perp);
  CHECK(cdist(rp, perp) < 1e-12);

  const auto rz = reflect(a, z);
  const auto expect = UnitVec2(Vec3{-1.0, 1.0, 0.0});
  CHECK(cdist(rz, expect) < 1e-12);
}

TEST_CASE("reflection is an involution and an isometry") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = rng.unit_vec<2>();
    const auto z = rng.unit_vec<2>();
    const auto w = rng.unit_vec<2>();
    CHECK(cdist(reflect(a, reflect(a, z)), z) < 1e-12);
    CHECK(std::abs(dot(reflect(a, z), reflect(a, w)) - dot(z, w)) < 1e-12);
  }
  // and in higher dimension
  Rng rng4(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = rng4.unit_vec<4>();
    const auto z = rng4.unit_vec<4>();
    CHECK(cdist(reflect(a, reflect(a, z)), z) < 1e-12);
  }
}

TEST_CASE("fold branches and image hemisphere") {
  Rng rng(21);
  const auto a = rng.unit_vec<2>();

  const auto below = UnitVec2(axpy<2>(any_orthogonal(a.coords()), -0.7, a.coords()));
  REQUIRE(dot(a, below) < 0.0);
  CHECK(cdist(fold(a, below), below) == 0.0);

  CHECK(dot(fold(a, a), a) == Catch::Approx(-1.0).margin(1e-14));

  for (int trial = 0; trial < 200; ++trial) {
    const auto z = rng.unit_vec<2>();
    const auto fz = fold(a, z);
    CHECK(dot(a, fz) <= 1e-12);
    CHECK(cdist(fold(a, fz), fz) < 1e-12);  // idempotent on image
  }
}

TEST_CASE("tangent projection") {
  Rng rng(31);
  const auto z = rng.unit_vec<2>();
  const auto pz = tangent_project(z, z);
  CHECK(norm<2>(pz) < 1e-13);

  const Vec3 t = any_orthogonal(z.coords());
  const Vec3 pt = tangent_project(z, t);
  CHECK(norm<2>(sub<2>(pt, t)) < 1e-13);

  for (int trial = 0; trial < 100; ++trial) {
    const auto w = rng.unit_vec<2>();
    const Vec3 p = tangent_project(z, w);
    CHECK(std::abs(dot<2>(p, z.coords())) < 1e-12);
    const double lhs = dot<2>(p, p);
    const double c = dot(w, z);
    CHECK(lhs == Catch::Approx(1.0 - c * c).margin(1e-12));
  }
}

TEST_CASE("commutation pi_z R_a = R_a pi_w for w = R_a z") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = rng.unit_vec<2>();
    const auto z = rng.unit_vec<2>();
    const auto w = reflect(a, z);
    const auto x = rng.unit_vec<2>();
    const Vec3 lhs = tangent_project(z, reflect(a, x));
    Vec3 rhs = tangent_project(w, x);
    const double ra = dot<2>(rhs, a.coords());
    rhs = axpy<2>(rhs, -2.0 * ra, a.coords());
    CHECK(norm<2>(sub<2>(lhs, rhs)) < 1e-10);
  }
}

TEST_CASE("fold midpoint") {
  const auto e1 = UnitVec2::axis(0);
  const auto e2 = UnitVec2::axis(1);
  CHECK(cdist(fold_midpoint(e1, e1), e1) < 1e-14);

  const auto c = fold_midpoint(e1, e2);
  CHECK(c[0] == Catch::Approx(1.0 / std::sqrt(2.0)));
  CHECK(c[1] == Catch::Approx(1.0 / std::sqrt(2.0)));

  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const auto z = rng.unit_vec<2>();
    const auto w = rng.unit_vec<2>();
    const double c12 = dot(z, w);
    if (c12 < -0.9 || c12 > 0.9) continue;
    const auto mid = fold_midpoint(z, w);
    const auto a = UnitVec2(sub<2>(w.coords(), z.coords()));
    CHECK(std::abs(dot(mid, a)) < 1e-10);
  }

  CHECK_THROWS_AS(fold_midpoint(e1, -e1), std::domain_error);
}

TEST_CASE("cap area closed forms and monotonicity") {
  CHECK(cap_area(M_PI / 2, 2) == Catch::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(cap_area(M_PI - 1e-9, 2) == Catch::Approx(4.0 * M_PI).epsilon(1e-8));
  CHECK(cap_area(M_PI / 2, 3) == Catch::Approx(M_PI * M_PI).epsilon(1e-13));

  double prev = 0.0;
  for (int i = 1; i < 40; ++i) {
    const double r = i * M_PI / 40.0;
    const double a = cap_area(r, 2);
    CHECK(a > prev);
    prev = a;
  }
  CHECK_THROWS_AS(cap_area(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(cap_area(M_PI, 2), std::domain_error);

  // n = 4 generic route agrees with a hemisphere sanity value
  CHECK(cap_area(M_PI / 2, 4) == Catch::Approx(0.5 * sphere_area(4)).epsilon(1e-10));
}

TEST_CASE("radius from area") {
  CHECK(radius_from_area(2.0 * M_PI, 2) == Catch::Approx(M_PI / 2).margin(1e-12));
  CHECK(radius_from_area(0.5 * sphere_area(3), 3) ==
        Catch::Approx(M_PI / 2).margin(1e-12));

  const double r6 = radius_from_area(6.0, 2);
  CHECK(r6 == Catch::Approx(bisect_radius_n2(6.0)).margin(1e-10));
  CHECK(r6 == Catch::Approx(std::acos(1.0 - 3.0 / M_PI)).margin(1e-10));
  CHECK(r6 == Catch::Approx(1.5257).margin(5e-4));

  Rng rng(61);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      const double r = rng.uniform(0.05, M_PI - 0.05);
      CHECK(radius_from_area(cap_area(r, n), n) == Catch::Approx(r).margin(1e-12));
    }
  }
  CHECK_THROWS_AS(radius_from_area(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(radius_from_area(4.0 * M_PI, 2), std::domain_error);
}

TEST_CASE("unit vectors stay unit") {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = rng.unit_vec<2>();
    const auto z = rng.unit_vec<2>();
    CHECK(std::abs(norm<2>(reflect(a, z).coords()) - 1.0) < 1e-12);
    CHECK(std::abs(norm<2>(fold(a, z).coords()) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(UnitVec2(Vec3{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("rotations") {
  Rng rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = rng.unit_vec<2>();
    const auto v = rng.unit_vec<2>();
    const Rot3 rot = rotation_between(u, v);
    CHECK(cdist(rot.apply(u), v) < 1e-12);
    // orthogonality
    const auto x = rng.unit_vec<2>();
    const auto y = rng.unit_vec<2>();
    CHECK(std::abs(dot(rot.apply(x), rot.apply(y)) - dot(x, y)) < 1e-12);
  }
  const auto p = rng.unit_vec<2>();
  const Rot3 anti = rotation_between(p, -p);
  CHECK(cdist(anti.apply(p), -p) < 1e-10);
}
