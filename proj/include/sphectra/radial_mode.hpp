#pragma once

// First nontrivial Neumann mode of a geodesic ball on S^n by shooting.
//
// The radial part J of the eigenfunction J(theta) v_i / sin(theta) solves
//
//   J'' + (n-1) cot(theta) J' + (mu - (n-1)/sin^2(theta)) J = 0,
//   J(0) = 0,  J'(r) = 0,
//
// and mu_1(B_r) is the smallest mu admitting a nontrivial solution. The
// substitution u = J / sin(theta) turns this into
//
//   u'' + (n+1) cot(theta) u' + (mu - n) u = 0,  u(0) = 1, u'(0) = 0,
//
// which is regular at the pole: the solver integrates u and reconstructs J.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphectra/sphere_core.hpp"

namespace sphectra {

class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

/// Radial profile of the first ball mode, normalized to J(r) = 1.
/// mu has multiplicity n on the ball; the profile is shared by all n
/// eigenfunctions J(theta) v_i / sin(theta).
struct RadialMode {
  int n = 2;
  double radius = 0.0;
  double mu = 0.0;
  std::vector<double> theta_grid;      // uniform on [0, r]
  std::vector<double> J_values;
  std::vector<double> J_prime_values;
  std::vector<double> u_values;        // J / sin(theta), regular at the pole
  std::vector<double> u_prime_values;

  double grid_step() const { return theta_grid.size() > 1 ? theta_grid[1] : 0.0; }
};

namespace detail {

struct ShootState {
  std::vector<double> u, up;  // on the uniform grid
};

// Series around the pole: u = 1 + b t^2 + c t^4 with
// b = (n - mu)/(2n+4), c = b (2(n+1)/3 + n - mu)/(4n+16).
inline void pole_series(int n, double mu, double t, double& u, double& up) {
  const double b = (n - mu) / (2.0 * n + 4.0);
  const double c = b * (2.0 * (n + 1.0) / 3.0 + n - mu) / (4.0 * n + 16.0);
  const double t2 = t * t;
  u = 1.0 + t2 * (b + t2 * c);
  up = t * (2.0 * b + 4.0 * c * t2);
}

// Integrates u over [0, r] on a uniform grid of m intervals with classical
// RK4, seeding the first few points from the pole series and refining the
// substep count where the cot friction is stiff.
inline ShootState integrate_u(int n, double mu, double r, int m) {
  ShootState st;
  st.u.resize(m + 1);
  st.up.resize(m + 1);
  const double h = r / m;

  const double series_cut = std::min(8.0 * h, 0.3 / std::sqrt(std::max(mu, 1.0)));
  int k0 = std::max(1, std::min(m / 4, static_cast<int>(series_cut / h)));
  for (int k = 0; k <= k0; ++k) pole_series(n, mu, k * h, st.u[k], st.up[k]);

  const double fric = n + 1.0;
  auto rhs = [&](double th, double u, double up, double& du, double& dup) {
    du = up;
    dup = -fric * (std::cos(th) / std::sin(th)) * up - (mu - n) * u;
  };

  double u = st.u[k0], up = st.up[k0];
  for (int k = k0; k < m; ++k) {
    const double th0 = k * h;
    int nsub = 1 + static_cast<int>(3.0 * h * fric / th0);
    if (nsub > 16) nsub = 16;
    const double hs = h / nsub;
    for (int s = 0; s < nsub; ++s) {
      const double t = th0 + s * hs;
      double k1u, k1p, k2u, k2p, k3u, k3p, k4u, k4p;
      rhs(t, u, up, k1u, k1p);
      rhs(t + 0.5 * hs, u + 0.5 * hs * k1u, up + 0.5 * hs * k1p, k2u, k2p);
      rhs(t + 0.5 * hs, u + 0.5 * hs * k2u, up + 0.5 * hs * k2p, k3u, k3p);
      rhs(t + hs, u + hs * k3u, up + hs * k3p, k4u, k4p);
      u += hs / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      up += hs / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    st.u[k + 1] = u;
    st.up[k + 1] = up;
  }
  return st;
}

// Neumann miss function J'(r) = cos(r) u(r) + sin(r) u'(r).
inline double shoot_miss(int n, double mu, double r, int m) {
  const ShootState st = integrate_u(n, mu, r, m);
  return std::cos(r) * st.u.back() + std::sin(r) * st.up.back();
}

}  // namespace detail

/// mu_1 of the geodesic ball B_r in S^n by l = 1 shooting. Restricted to
/// r <= pi/2, where the first mode is known to be J(theta) v_i / sin(theta)
/// with J positive increasing; larger caps go through the mesh solver, whose
/// min-max does not presume the angular structure.
inline RadialMode solve_ball_mode(int n, double r, int grid = 2048) {
  if (n < 2) throw std::domain_error("solve_ball_mode: dimension must be >= 2");
  if (!(r > 0.0 && r <= M_PI / 2 + 1e-9))
    throw std::domain_error(
        "solve_ball_mode: radius must lie in (0, pi/2]; larger caps are a "
        "mesh_fem problem");
  if (grid < 64) grid = 64;

  // The first root sits below both the flat-disk estimate and a few times n.
  const double disk = 1.8412 / r;
  const double upper = 1.05 * std::max(4.0 * n, 4.0 * disk * disk);
  const int scan = 360;
  double lo = 1e-9, hi = 0.0;
  double f_lo = detail::shoot_miss(n, lo, r, grid);
  bool bracketed = false;
  for (int s = 1; s <= scan; ++s) {
    const double mu = upper * s / scan;
    const double f = detail::shoot_miss(n, mu, r, grid);
    if (f_lo * f <= 0.0) {
      hi = mu;
      bracketed = true;
      break;
    }
    lo = mu;
    f_lo = f;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "solve_ball_mode: no Neumann bracket for n=" << n << " r=" << r
        << " scanned mu in (0, " << upper << "]";
    throw SolveError(msg.str());
  }

  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = detail::shoot_miss(n, mid, r, grid);
    if (f_lo * f <= 0.0)
      hi = mid;
    else {
      lo = mid;
      f_lo = f;
    }
  }
  const double mu = 0.5 * (lo + hi);

  const detail::ShootState st = detail::integrate_u(n, mu, r, grid);
  RadialMode mode;
  mode.n = n;
  mode.radius = r;
  mode.mu = mu;
  mode.theta_grid.resize(grid + 1);
  mode.J_values.resize(grid + 1);
  mode.J_prime_values.resize(grid + 1);
  mode.u_values.resize(grid + 1);
  mode.u_prime_values.resize(grid + 1);
  const double h = r / grid;
  const double s = 1.0 / (std::sin(r) * st.u.back());  // J(r) = 1
  for (int k = 0; k <= grid; ++k) {
    const double th = k * h;
    mode.theta_grid[k] = th;
    mode.u_values[k] = st.u[k] * s;
    mode.u_prime_values[k] = st.up[k] * s;
    mode.J_values[k] = std::sin(th) * mode.u_values[k];
    mode.J_prime_values[k] =
        std::cos(th) * mode.u_values[k] + std::sin(th) * mode.u_prime_values[k];
  }
  mode.J_values[0] = 0.0;
  mode.J_prime_values.back() = 0.0;  // enforced by the shot, exact by contract

  // AB95 shape properties: J positive, J' positive on the open interval.
  for (int k = 1; k < grid; ++k) {
    if (!(mode.J_values[k] > 0.0) || !(mode.J_prime_values[k] > -1e-10)) {
      std::ostringstream msg;
      msg << "solve_ball_mode: profile violates positivity/monotonicity at "
          << "theta=" << mode.theta_grid[k];
      throw SolveError(msg.str());
    }
  }
  return mode;
}

/// Max-norm ODE residual on the interior grid, with J'' recovered from the
/// stored J' by a fourth-order stencil. Independent of the integrator's own
/// error control.
inline double max_ode_residual(const RadialMode& mode) {
  const auto& th = mode.theta_grid;
  const auto& J = mode.J_values;
  const auto& Jp = mode.J_prime_values;
  const double h = mode.grid_step();
  const int m = static_cast<int>(th.size()) - 1;
  double worst = 0.0;
  for (int k = 2; k <= m - 2; ++k) {
    const double Jpp =
        (Jp[k - 2] - 8.0 * Jp[k - 1] + 8.0 * Jp[k + 1] - Jp[k + 2]) / (12.0 * h);
    const double s = std::sin(th[k]);
    const double res = Jpp + (mode.n - 1.0) * (std::cos(th[k]) / s) * Jp[k] +
                       (mode.mu - (mode.n - 1.0) / (s * s)) * J[k];
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

}  // namespace sphectra
