#pragma once

// Points of S^n embedded in R^{n+1}, plus the small amount of flat vector
// algebra the rest of the library needs. N is the sphere dimension, so the
// embedding has N+1 coordinates.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace sphectra {

template <int N>
using Vec = std::array<double, N + 1>;

using Vec3 = Vec<2>;

template <int N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0.0;
  for (int i = 0; i <= N; ++i) s += a[i] * b[i];
  return s;
}

template <int N>
double norm(const Vec<N>& a) {
  return std::sqrt(dot<N>(a, a));
}

template <int N>
Vec<N> add(const Vec<N>& a, const Vec<N>& b) {
  Vec<N> r;
  for (int i = 0; i <= N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <int N>
Vec<N> sub(const Vec<N>& a, const Vec<N>& b) {
  Vec<N> r;
  for (int i = 0; i <= N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <int N>
Vec<N> scale(const Vec<N>& a, double s) {
  Vec<N> r;
  for (int i = 0; i <= N; ++i) r[i] = a[i] * s;
  return r;
}

// a + s*b
template <int N>
Vec<N> axpy(const Vec<N>& a, double s, const Vec<N>& b) {
  Vec<N> r;
  for (int i = 0; i <= N; ++i) r[i] = a[i] + s * b[i];
  return r;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

/// A point of S^N, unit in the Euclidean embedding. Construction normalizes
/// and rejects near-zero input; every operation that returns a UnitVec
/// re-normalizes, so |coords| = 1 holds to 1e-12 throughout.
template <int N>
class UnitVec {
  static_assert(N >= 2, "sphere dimension must be at least 2");

 public:
  UnitVec() : v_{} { v_[N] = 1.0; }

  explicit UnitVec(const Vec<N>& raw) : v_(raw) {
    const double len = norm<N>(v_);
    if (!(len > 1e-14))
      throw std::invalid_argument("UnitVec: cannot normalize near-zero vector");
    for (int i = 0; i <= N; ++i) v_[i] /= len;
  }

  static UnitVec axis(int k) {
    Vec<N> raw{};
    raw.at(static_cast<std::size_t>(k)) = 1.0;
    return UnitVec(raw);
  }

  const Vec<N>& coords() const { return v_; }
  double operator[](int i) const { return v_[i]; }

  UnitVec operator-() const {
    Vec<N> raw;
    for (int i = 0; i <= N; ++i) raw[i] = -v_[i];
    UnitVec r;
    r.v_ = raw;  // negation preserves the norm exactly
    return r;
  }

  friend double dot(const UnitVec& a, const UnitVec& b) {
    return dot<N>(a.v_, b.v_);
  }

  friend bool operator==(const UnitVec& a, const UnitVec& b) {
    return a.v_ == b.v_;
  }

 private:
  Vec<N> v_;
};

using UnitVec2 = UnitVec<2>;  // S^2, the mesh/fold setting

/// Geodesic distance on the sphere, robust near the clamp points.
template <int N>
double geodesic_distance(const UnitVec<N>& a, const UnitVec<N>& b) {
  double c = dot(a, b);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

/// Any unit vector orthogonal to v (used to seed tangent frames).
inline Vec3 any_orthogonal(const Vec3& v) {
  Vec3 r;
  if (std::abs(v[0]) <= std::abs(v[1]) && std::abs(v[0]) <= std::abs(v[2]))
    r = {0.0, -v[2], v[1]};
  else if (std::abs(v[1]) <= std::abs(v[0]) && std::abs(v[1]) <= std::abs(v[2]))
    r = {v[2], 0.0, -v[0]};
  else
    r = {-v[1], v[0], 0.0};
  const double len = norm<2>(r);
  return scale<2>(r, 1.0 / len);
}

/// Orthonormal frame (e1, e2) of the tangent plane at z on S^2.
struct TangentFrame {
  Vec3 e1, e2;
};

inline TangentFrame tangent_frame(const UnitVec2& z) {
  TangentFrame f;
  f.e1 = any_orthogonal(z.coords());
  f.e2 = cross(z.coords(), f.e1);
  return f;
}

/// 3x3 rotation matrices, only needed on S^2.
struct Rot3 {
  std::array<Vec3, 3> row;

  Vec3 apply(const Vec3& v) const {
    return {dot<2>(row[0], v), dot<2>(row[1], v), dot<2>(row[2], v)};
  }
  UnitVec2 apply(const UnitVec2& v) const { return UnitVec2(apply(v.coords())); }
};

inline Rot3 identity_rotation() {
  return Rot3{{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}};
}

/// Rotation taking u to v (Rodrigues). Antipodal pairs rotate by pi around
/// an arbitrary orthogonal axis.
inline Rot3 rotation_between(const UnitVec2& u, const UnitVec2& v) {
  const Vec3 a = u.coords();
  const Vec3 b = v.coords();
  const Vec3 w = cross(a, b);
  const double c = dot<2>(a, b);
  if (c < -1.0 + 1e-12) {
    const Vec3 ax = any_orthogonal(a);
    Rot3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r.row[i][j] = 2.0 * ax[i] * ax[j] - (i == j ? 1.0 : 0.0);
    return r;
  }
  const double k = 1.0 / (1.0 + c);
  Rot3 r;
  // I + [w]_x + k [w]_x^2
  r.row[0] = {1.0 - k * (w[1] * w[1] + w[2] * w[2]), -w[2] + k * w[0] * w[1],
              w[1] + k * w[0] * w[2]};
  r.row[1] = {w[2] + k * w[0] * w[1], 1.0 - k * (w[0] * w[0] + w[2] * w[2]),
              -w[0] + k * w[1] * w[2]};
  r.row[2] = {-w[1] + k * w[0] * w[2], w[0] + k * w[1] * w[2],
              1.0 - k * (w[0] * w[0] + w[1] * w[1])};
  return r;
}

}  // namespace sphectra
