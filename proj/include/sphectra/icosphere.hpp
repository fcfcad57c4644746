#pragma once

// Icosphere meshes of S^2: recursive 4-way subdivision of the icosahedron
// with midpoint projection. Subdivision appends the four children of
// triangle t as 4t..4t+3, which gives an O(level) point locator by
// descending the hierarchy.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sphectra/quadrature.hpp"
#include "sphectra/unitvec.hpp"

namespace sphectra {

struct SphMesh {
  std::vector<UnitVec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  int level = 0;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  Vec3 centroid_raw(int t) const {
    const auto& tri = triangles[t];
    Vec3 c{0, 0, 0};
    for (int k = 0; k < 3; ++k) c = add<2>(c, vertices[tri[k]].coords());
    return scale<2>(c, 1.0 / 3.0);
  }

  UnitVec2 centroid(int t) const { return UnitVec2(centroid_raw(t)); }

  double flat_area(int t) const {
    const auto& tri = triangles[t];
    const Vec3 e1 = sub<2>(vertices[tri[1]].coords(), vertices[tri[0]].coords());
    const Vec3 e2 = sub<2>(vertices[tri[2]].coords(), vertices[tri[0]].coords());
    return 0.5 * norm<2>(cross(e1, e2));
  }

  double total_flat_area() const {
    double s = 0.0;
    for (int t = 0; t < triangle_count(); ++t) s += flat_area(t);
    return s;
  }

  void write_off(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "OFF\n" << vertex_count() << ' ' << triangle_count() << " 0\n";
    out.precision(17);
    for (const auto& v : vertices)
      out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& t : triangles)
      out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
};

namespace detail {

inline SphMesh icosahedron() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const std::array<Vec3, 12> raw = {{{-1, phi, 0},
                                     {1, phi, 0},
                                     {-1, -phi, 0},
                                     {1, -phi, 0},
                                     {0, -1, phi},
                                     {0, 1, phi},
                                     {0, -1, -phi},
                                     {0, 1, -phi},
                                     {phi, 0, -1},
                                     {phi, 0, 1},
                                     {-phi, 0, -1},
                                     {-phi, 0, 1}}};
  SphMesh m;
  for (const auto& v : raw) m.vertices.emplace_back(v);
  m.triangles = {{0, 11, 5},  {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},   {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},   {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},   {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  m.level = 0;
  return m;
}

inline SphMesh subdivide(const SphMesh& m) {
  SphMesh out;
  out.vertices = m.vertices;
  out.level = m.level + 1;
  out.triangles.reserve(m.triangles.size() * 4);
  std::unordered_map<std::uint64_t, int> midpoint;
  auto mid = [&](int a, int b) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
        static_cast<std::uint32_t>(std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Vec3 s = add<2>(m.vertices[a].coords(), m.vertices[b].coords());
    out.vertices.emplace_back(s);
    const int idx = static_cast<int>(out.vertices.size()) - 1;
    midpoint.emplace(key, idx);
    return idx;
  };
  for (const auto& t : m.triangles) {
    const int ab = mid(t[0], t[1]);
    const int bc = mid(t[1], t[2]);
    const int ca = mid(t[2], t[0]);
    // corner children first, center last: child c of parent p is 4p + c
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({t[1], bc, ab});
    out.triangles.push_back({t[2], ca, bc});
    out.triangles.push_back({ab, bc, ca});
  }
  return out;
}

}  // namespace detail

inline SphMesh build_icosphere(int level) {
  if (level < 0 || level > 8)
    throw std::domain_error("build_icosphere: level must lie in [0, 8]");
  SphMesh m = detail::icosahedron();
  for (int l = 0; l < level; ++l) m = detail::subdivide(m);
  return m;
}

/// Vertex rule: nodes at mesh vertices, weights the dual (one third of the
/// adjacent flat areas), rescaled so the total equals the smooth sphere
/// measure the rule stands in for.
inline QuadratureRule mesh_vertex_rule(const SphMesh& mesh) {
  QuadratureRule rule;
  rule.kind = RuleKind::mesh_vertex;
  rule.nodes = mesh.vertices;
  rule.weights.assign(mesh.vertices.size(), 0.0);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double third = mesh.flat_area(t) / 3.0;
    for (int k = 0; k < 3; ++k) rule.weights[mesh.triangles[t][k]] += third;
  }
  const double scale = 4.0 * M_PI / rule.total_weight();
  for (double& w : rule.weights) w *= scale;
  return rule;
}

/// Midpoint rule: nodes at projected centroids, weights the flat areas,
/// rescaled to the sphere measure.
inline QuadratureRule mesh_midpoint_rule(const SphMesh& mesh) {
  QuadratureRule rule;
  rule.kind = RuleKind::mesh_midpoint;
  rule.nodes.reserve(mesh.triangle_count());
  rule.weights.reserve(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    rule.nodes.push_back(mesh.centroid(t));
    rule.weights.push_back(mesh.flat_area(t));
  }
  const double scale = 4.0 * M_PI / rule.total_weight();
  for (double& w : rule.weights) w *= scale;
  return rule;
}

/// All levels 0..L kept together for point location: a direction descends
/// from the base icosahedron through the 4-way children by the largest
/// minimum barycentric coordinate.
class IcosphereHierarchy {
 public:
  explicit IcosphereHierarchy(int level) {
    levels_.push_back(detail::icosahedron());
    for (int l = 0; l < level; ++l)
      levels_.push_back(detail::subdivide(levels_.back()));
  }

  const SphMesh& finest() const { return levels_.back(); }
  const SphMesh& at(int level) const { return levels_.at(level); }
  int level() const { return static_cast<int>(levels_.size()) - 1; }

  struct Location {
    int triangle = -1;
    std::array<double, 3> bary{};
  };

  Location locate(const UnitVec2& dir) const {
    int tri = 0;
    double best = -1e30;
    for (int t = 0; t < 20; ++t) {
      const double q = min_bary(levels_[0], t, dir);
      if (q > best) {
        best = q;
        tri = t;
      }
    }
    for (std::size_t l = 1; l < levels_.size(); ++l) {
      int pick = 4 * tri;
      best = -1e30;
      for (int c = 0; c < 4; ++c) {
        const double q = min_bary(levels_[l], 4 * tri + c, dir);
        if (q > best) {
          best = q;
          pick = 4 * tri + c;
        }
      }
      tri = pick;
    }
    Location loc;
    loc.triangle = tri;
    loc.bary = barycentric(levels_.back(), tri, dir);
    return loc;
  }

  /// P1 interpolation of per-vertex values at an arbitrary direction.
  double interpolate(const std::vector<double>& vertex_values,
                     const UnitVec2& dir) const {
    const Location loc = locate(dir);
    const auto& tri = levels_.back().triangles[loc.triangle];
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += loc.bary[k] * vertex_values[tri[k]];
    return s;
  }

 private:
  static std::array<double, 3> barycentric(const SphMesh& m, int t,
                                           const UnitVec2& dir) {
    const auto& tri = m.triangles[t];
    const Vec3& p0 = m.vertices[tri[0]].coords();
    const Vec3& p1 = m.vertices[tri[1]].coords();
    const Vec3& p2 = m.vertices[tri[2]].coords();
    const Vec3& d = dir.coords();
    // signed volumes: b_i proportional to det(d, p_j, p_k)
    const double b0 = dot<2>(d, cross(p1, p2));
    const double b1 = dot<2>(d, cross(p2, p0));
    const double b2 = dot<2>(d, cross(p0, p1));
    const double s = b0 + b1 + b2;
    if (std::abs(s) < 1e-300) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return {b0 / s, b1 / s, b2 / s};
  }

  // The barycentric ratios are antipodally symmetric, so the cone test must
  // also check that the direction points at the face, not away from it.
  static double min_bary(const SphMesh& m, int t, const UnitVec2& dir) {
    if (dot<2>(m.centroid_raw(t), dir.coords()) <= 0.0) return -2.0;
    const auto b = barycentric(m, t, dir);
    return std::min({b[0], b[1], b[2]});
  }

  std::vector<SphMesh> levels_;
};

}  // namespace sphectra
