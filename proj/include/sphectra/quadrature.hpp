#pragma once

// Quadrature on S^2 (full product rules) and 1D zonal rules on S^n. Fold
// integrands are handled by classifying each node against the folding
// hyperplane instead of splitting the domain; the integrand is continuous
// across a-perp, so the node classification only costs first order in the
// jump layer of the derivative.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphectra/sphere_core.hpp"
#include "sphectra/unitvec.hpp"

namespace sphectra {

/// Nodes and weights of a Gauss-Legendre rule on [-1, 1], by Newton iteration
/// on the Legendre recurrence.
struct GaussLegendre {
  std::vector<double> x, w;

  explicit GaussLegendre(int npts) : x(npts), w(npts) {
    if (npts < 1) throw std::invalid_argument("GaussLegendre: need >= 1 node");
    const int m = (npts + 1) / 2;
    for (int i = 0; i < m; ++i) {
      // Chebyshev-like initial guess
      double z = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < npts; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = npts * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = -z;
      x[npts - 1 - i] = z;
      w[i] = w[npts - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
  }
};

enum class RuleKind { product_gauss, mesh_vertex, mesh_midpoint };

/// A fixed set of nodes and positive weights on S^2 whose weights sum to the
/// sphere measure. Mesh-derived rules are rescaled so full-sphere totals are
/// exact; they stand in for the smooth measure, not the polyhedral one.
struct QuadratureRule {
  std::vector<UnitVec2> nodes;
  std::vector<double> weights;
  RuleKind kind = RuleKind::product_gauss;

  std::size_t size() const { return nodes.size(); }

  double total_weight() const {
    double s = 0.0;
    for (double wi : weights) s += wi;
    return s;
  }

  void write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "x,y,z,weight\n";
    out.precision(17);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      out << nodes[i][0] << ',' << nodes[i][1] << ',' << nodes[i][2] << ','
          << weights[i] << '\n';
  }
};

/// Full-sphere product rule on S^2: Gauss-Legendre in cos(theta) times a
/// uniform azimuthal grid, with theta measured from `pole`.
inline QuadratureRule product_rule(int n_theta, int n_phi,
                                   const UnitVec2& pole = UnitVec2::axis(2)) {
  if (n_theta < 2 || n_phi < 4)
    throw std::invalid_argument("product_rule: resolution too small");
  const GaussLegendre gl(n_theta);
  const Rot3 rot = rotation_between(UnitVec2::axis(2), pole);
  QuadratureRule rule;
  rule.kind = RuleKind::product_gauss;
  rule.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  rule.weights.reserve(rule.nodes.capacity());
  const double wphi = 2.0 * M_PI / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double ct = gl.x[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = wphi * (j + 0.5);
      const Vec3 v{st * std::cos(phi), st * std::sin(phi), ct};
      rule.nodes.push_back(rot.apply(UnitVec2(v)));
      rule.weights.push_back(gl.w[i] * wphi);
    }
  }
  return rule;
}

/// 1D rule for zonal integrands on S^n: integrates f(theta) over the sphere
/// as sum w_i f(theta_i) with w_i = |S^{n-1}| sin^{n-1}(theta_i) * GL weight.
struct ZonalRule {
  std::vector<double> theta, weight;
};

inline ZonalRule zonal_rule(int n, int n_theta) {
  if (n < 2) throw std::invalid_argument("zonal_rule: dimension must be >= 2");
  const GaussLegendre gl(n_theta);
  const double ring = sphere_area(n - 1);
  ZonalRule rule;
  rule.theta.resize(n_theta);
  rule.weight.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    const double th = 0.5 * M_PI * (gl.x[i] + 1.0);
    rule.theta[i] = th;
    rule.weight[i] =
        0.5 * M_PI * gl.w[i] * ring * std::pow(std::sin(th), n - 1);
  }
  return rule;
}

template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

/// Evaluates sum_i w_i rho(v_i) f(v_i, F_a v_i). Nodes with |a.v| below the
/// identity tolerance stay on the identity branch, matching the definition
/// of F_a on a-perp.
template <class Rho, class F>
double integrate_folded(const QuadratureRule& rule, Rho&& rho,
                        const UnitVec2& a, F&& f,
                        double identity_tol = 1e-13) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const UnitVec2& v = rule.nodes[i];
    const UnitVec2 fv = dot(a, v) > identity_tol ? reflect(a, v) : v;
    s += rule.weights[i] * rho(v) * f(v, fv);
  }
  return s;
}

}  // namespace sphectra
