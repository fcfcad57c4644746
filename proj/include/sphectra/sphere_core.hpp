#pragma once

// Reflections, fold maps and geodesic caps on S^n. The fold F_a fixes the
// closed hemisphere a^- (including the equator a-perp) and reflects a^+
// across the hyperplane a-perp, so its image always lies in a^- union a-perp.

#include <cmath>
#include <stdexcept>

#include "sphectra/unitvec.hpp"

namespace sphectra {

/// R_a(z) = z - 2 (z.a) a, the reflection across the hyperplane a-perp.
template <int N>
UnitVec<N> reflect(const UnitVec<N>& a, const UnitVec<N>& z) {
  const double za = dot(a, z);
  Vec<N> raw;
  for (int i = 0; i <= N; ++i) raw[i] = z[i] - 2.0 * za * a[i];
  return UnitVec<N>(raw);
}

/// F_a(z): R_a(z) on the open hemisphere a^+, identity elsewhere.
template <int N>
UnitVec<N> fold(const UnitVec<N>& a, const UnitVec<N>& z) {
  return dot(a, z) > 0.0 ? reflect(a, z) : z;
}

/// pi_z(w) = w - (w.z) z, the projection of w on the tangent plane at z.
template <int N>
Vec<N> tangent_project(const UnitVec<N>& z, const Vec<N>& w) {
  const double wz = dot<N>(w, z.coords());
  Vec<N> r;
  for (int i = 0; i <= N; ++i) r[i] = w[i] - wz * z[i];
  return r;
}

template <int N>
Vec<N> tangent_project(const UnitVec<N>& z, const UnitVec<N>& w) {
  return tangent_project<N>(z, w.coords());
}

/// Geodesic midpoint c = (z+w)/|z+w|; for w = R_a(z) this is the point of
/// the folding equator between z and its mirror image.
template <int N>
UnitVec<N> fold_midpoint(const UnitVec<N>& z, const UnitVec<N>& w) {
  const Vec<N> s = add<N>(z.coords(), w.coords());
  if (norm<N>(s) < 1e-10)
    throw std::domain_error("fold_midpoint: antipodal inputs have no midpoint");
  return UnitVec<N>(s);
}

/// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
inline double sphere_area(int n) {
  if (n < 1) throw std::domain_error("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

namespace detail {

// integral of sin^{n-1} over [0, r] by composite Gauss-Legendre; only used
// for n >= 4 where no convenient closed form exists.
inline double sin_power_integral(double r, int n) {
  // 5-point Gauss-Legendre on [0,1]
  static const double gx[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                               0.76923465505284155, 0.95308992296933200};
  static const double gw[5] = {0.11846344252809454, 0.23931433524968324,
                               0.28444444444444444, 0.23931433524968324,
                               0.11846344252809454};
  const int segs = 64;
  const double h = r / segs;
  double total = 0.0;
  for (int s = 0; s < segs; ++s) {
    const double a = s * h;
    for (int q = 0; q < 5; ++q)
      total += gw[q] * std::pow(std::sin(a + gx[q] * h), n - 1);
  }
  return total * h;
}

}  // namespace detail

/// Area of the geodesic cap of the given radius on S^n.
inline double cap_area(double radius, int n) {
  if (!(radius > 0.0 && radius < M_PI))
    throw std::domain_error("cap_area: radius must lie in (0, pi)");
  if (n < 2) throw std::domain_error("cap_area: dimension must be >= 2");
  switch (n) {
    case 2:
      return 2.0 * M_PI * (1.0 - std::cos(radius));
    case 3:
      return 2.0 * M_PI * (radius - std::sin(radius) * std::cos(radius));
    default:
      return sphere_area(n - 1) * detail::sin_power_integral(radius, n);
  }
}

/// Inverse of cap_area in the radius: bisection plus Newton polish, exact to
/// 1e-12 against the same area evaluation.
inline double radius_from_area(double area, int n) {
  const double total = sphere_area(n);
  if (!(area > 0.0 && area < total))
    throw std::domain_error("radius_from_area: area must lie in (0, |S^n|)");
  double lo = 0.0, hi = M_PI;
  double r = M_PI * 0.5;
  for (int it = 0; it < 60; ++it) {
    r = 0.5 * (lo + hi);
    (cap_area(r, n) < area ? lo : hi) = r;
  }
  // dA/dr = |S^{n-1}| sin^{n-1}(r)
  const double ring = sphere_area(n - 1);
  for (int it = 0; it < 4; ++it) {
    const double f = cap_area(r, n) - area;
    const double df = ring * std::pow(std::sin(r), n - 1);
    if (df <= 0.0) break;
    const double step = f / df;
    const double next = r - step;
    if (next <= lo || next >= hi) break;
    r = next;
  }
  return r;
}

/// Geodesic cap B_{center, radius} on S^n.
template <int N>
struct Cap {
  UnitVec<N> center;
  double radius;  // geodesic radians, in (0, pi)

  Cap(const UnitVec<N>& c, double r) : center(c), radius(r) {
    if (!(r > 0.0 && r < M_PI))
      throw std::domain_error("Cap: radius must lie in (0, pi)");
  }

  double area() const { return cap_area(radius, N); }

  bool contains(const UnitVec<N>& v) const {
    return geodesic_distance(center, v) < radius;
  }
};

using Cap2 = Cap<2>;

}  // namespace sphectra
