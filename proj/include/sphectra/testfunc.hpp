#pragma once

// Test functions built from a critical pair:
//
//   phi_xi(v) = g(z . F_a v) (xi . F_a v),   xi a unit tangent at z,
//
// orthogonal to 1 and u_1 in L^2(rho) by criticality. The basis selection
// rotates xi in the tangent circle at z until phi_xi also kills u_2 (the
// circle map xi -> int u_2 phi_xi rho is odd, so a zero exists); the quotient
// int rho |grad phi|^2 / int rho phi^2 is evaluated on the mesh that carries
// the domain.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sphectra/fem.hpp"
#include "sphectra/foldmap.hpp"
#include "sphectra/profile.hpp"

namespace sphectra {

struct TestFunction {
  FoldCritPair pair;
  Vec3 xi;  // unit tangent at pair.z
  FoldWeight weight;
  double identity_tol = 1e-13;

  double operator()(const UnitVec2& v) const {
    const UnitVec2 fv =
        dot(pair.a, v) > identity_tol ? reflect(pair.a, v) : v;
    return weight.g(dot(pair.z, fv)) * dot<2>(xi, fv.coords());
  }
};

/// int phi rho and int phi u rho over the rule carried by rho.
inline double weighted_integral(const MassDensity& rho, const TestFunction& phi) {
  const QuadratureRule& rule = *rho.rule;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * rho.values[i] * phi(rule.nodes[i]);
  return s;
}

inline double weighted_integral(const MassDensity& rho,
                                const std::vector<double>& u_at_nodes,
                                const TestFunction& phi) {
  const QuadratureRule& rule = *rho.rule;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * rho.values[i] * u_at_nodes[i] * phi(rule.nodes[i]);
  return s;
}

struct BasisSelection {
  Vec3 xi1, xi2;
  bool degenerate = false;  // the circle map vanished identically
  double f_at_xi2 = 0.0;    // int u_2 phi_{xi2} rho at the selected direction
};

/// Chooses xi2 with int u_2 phi_{xi2} rho = 0 by scanning the odd circle map
/// on a half circle and bisecting a sign change; xi1 completes the tangent
/// basis. When the map is identically zero within tolerance every direction
/// works and the canonical frame is returned.
inline BasisSelection select_basis(const MassDensity& rho,
                                   const std::vector<double>& u2_at_nodes,
                                   const FoldCritPair& pair, const FoldWeight& W,
                                   double degenerate_tol,
                                   int scan_resolution = 1024) {
  const QuadratureRule& rule = *rho.rule;
  const TangentFrame frame = tangent_frame(pair.z);

  // the integrand is linear in xi, so the circle map is c1 cos + c2 sin with
  // the coefficients accumulated once over the nodes
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const UnitVec2& v = rule.nodes[i];
    const UnitVec2 fv = dot(pair.a, v) > 1e-13 ? reflect(pair.a, v) : v;
    const double common = rule.weights[i] * rho.values[i] * u2_at_nodes[i] *
                          W.g(dot(pair.z, fv));
    c1 += common * dot<2>(frame.e1, fv.coords());
    c2 += common * dot<2>(frame.e2, fv.coords());
  }
  auto f = [&](double angle) {
    return std::cos(angle) * c1 + std::sin(angle) * c2;
  };
  auto xi_of = [&](double angle) {
    Vec3 xi;
    for (int k = 0; k < 3; ++k)
      xi[k] = std::cos(angle) * frame.e1[k] + std::sin(angle) * frame.e2[k];
    return xi;
  };

  BasisSelection out;
  double max_abs = 0.0;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  double prev_angle = 0.0, prev_val = f(0.0);
  max_abs = std::abs(prev_val);
  for (int s = 1; s <= scan_resolution; ++s) {
    const double angle = M_PI * s / scan_resolution;
    const double val = f(angle);
    max_abs = std::max(max_abs, std::abs(val));
    if (!bracketed && prev_val * val <= 0.0) {
      lo = prev_angle;
      hi = angle;
      bracketed = true;
    }
    prev_angle = angle;
    prev_val = val;
  }

  if (max_abs <= degenerate_tol || !bracketed) {
    if (max_abs > degenerate_tol)
      throw SolveError(
          "select_basis: odd circle map shows no sign change above tolerance");
    out.degenerate = true;
    out.xi1 = frame.e1;
    out.xi2 = frame.e2;
    out.f_at_xi2 = f(M_PI / 2);
    return out;
  }

  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (flo * fm <= 0.0)
      hi = mid;
    else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo < 1e-15) break;
  }
  const double angle = 0.5 * (lo + hi);
  out.xi2 = xi_of(angle);
  out.xi1 = xi_of(angle + M_PI / 2);
  out.f_at_xi2 = f(angle);
  return out;
}

/// int rho |grad phi|^2 / int rho phi^2 evaluated with the P1 energy of the
/// masked system: phi is vertex-sampled, the fold kink is resolved by the
/// mesh at its own order.
inline double rayleigh_of_test(const TestFunction& phi, const SphMesh& mesh,
                               const FemSystem& sys) {
  const int dofs = static_cast<int>(sys.vertex_of_dof.size());
  Eigen::VectorXd x(dofs);
  for (int d = 0; d < dofs; ++d)
    x(d) = phi(mesh.vertices[sys.vertex_of_dof[d]]);
  const double num = x.dot(sys.K * x);
  const double den = x.dot(sys.M * x);
  if (!(den > 1e-14 * sys.mass))
    throw std::domain_error("rayleigh_of_test: phi vanishes rho-a.e.");
  return num / den;
}

}  // namespace sphectra
