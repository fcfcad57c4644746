#pragma once

// Extension of the ball profile J to [0, pi] and the derived fold weights
//
//   g(t) = J(arccos t) / sqrt(1 - t^2),   G(t) = int_0^t g,
//   b(theta) = J'(theta)^2 + (n-1) J(theta)^2 / sin(theta)^2.
//
// J is constant (= J(r) = 1) on [r, pi/2] and mirror-symmetric about pi/2.
// In terms of the regularized u = J/sin the weights are smooth through the
// poles: g(cos theta) = u(theta) for theta <= r, g = 1/sqrt(1-t^2) on the
// constant stretch, and G(cos theta) = arcsin(cos r) + int_theta^r u.
// g(+-1) takes the finite continuous limit u(0) = J'(0).

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "sphectra/radial_mode.hpp"

namespace sphectra {

namespace detail {

// Cubic Hermite on a uniform grid: values f and exact derivatives fp.
struct HermiteTable {
  double h = 1.0;
  std::vector<double> f, fp;

  double eval(double x) const {
    const int last = static_cast<int>(f.size()) - 2;
    int k = static_cast<int>(x / h);
    k = std::clamp(k, 0, last);
    const double s = x / h - k;
    const double s2 = s * s, s3 = s2 * s;
    return f[k] * (2 * s3 - 3 * s2 + 1) + h * fp[k] * (s3 - 2 * s2 + s) +
           f[k + 1] * (-2 * s3 + 3 * s2) + h * fp[k + 1] * (s3 - s2);
  }

  // Antiderivative int_0^x of the piecewise cubic, with a precomputed prefix.
  void build_prefix() {
    prefix_.assign(f.size(), 0.0);
    for (std::size_t k = 0; k + 1 < f.size(); ++k)
      prefix_[k + 1] = prefix_[k] + 0.5 * h * (f[k] + f[k + 1]) +
                       h * h / 12.0 * (fp[k] - fp[k + 1]);
  }

  double integral_to(double x) const {
    const int last = static_cast<int>(f.size()) - 2;
    int k = static_cast<int>(x / h);
    k = std::clamp(k, 0, last);
    const double s = x / h - k;
    const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2;
    const double part = f[k] * (0.5 * s4 - s3 + s) +
                        h * fp[k] * (0.25 * s4 - 2.0 / 3.0 * s3 + 0.5 * s2) +
                        f[k + 1] * (-0.5 * s4 + s3) +
                        h * fp[k + 1] * (0.25 * s4 - s3 / 3.0);
    return prefix_[k] + h * part;
  }

  double total_integral() const { return prefix_.back(); }

 private:
  std::vector<double> prefix_;
};

}  // namespace detail

/// The ball profile extended to [0, pi]: J on [0, r], constant 1 on
/// [r, pi/2], mirrored across pi/2. Requires r <= pi/2 (the transplantation
/// always works with the half-mass ball).
class ExtendedProfile {
 public:
  explicit ExtendedProfile(RadialMode m) : mode_(std::move(m)) {
    if (mode_.radius > M_PI / 2 + 1e-12)
      throw std::domain_error(
          "ExtendedProfile: extension defined only for r <= pi/2");
    const double h = mode_.grid_step();
    const int m_pts = static_cast<int>(mode_.theta_grid.size());

    J_.h = h;
    J_.f = mode_.J_values;
    J_.fp = mode_.J_prime_values;
    J_.build_prefix();

    u_.h = h;
    u_.f = mode_.u_values;
    u_.fp = mode_.u_prime_values;

    // J' interpolated with its own derivative from the ODE; J''(0) = 0 by the
    // pole expansion.
    Jp_.h = h;
    Jp_.f = mode_.J_prime_values;
    Jp_.fp.resize(m_pts);
    Jp_.fp[0] = 0.0;
    for (int k = 1; k < m_pts; ++k) {
      const double th = mode_.theta_grid[k];
      const double s = std::sin(th);
      Jp_.fp[k] = -(mode_.n - 1.0) * (std::cos(th) / s) * mode_.J_prime_values[k] -
                  (mode_.mu - (mode_.n - 1.0) / (s * s)) * mode_.J_values[k];
    }
  }

  const RadialMode& mode() const { return mode_; }
  int n() const { return mode_.n; }
  double radius() const { return mode_.radius; }
  double mu() const { return mode_.mu; }

  /// J on [0, pi].
  double J(double theta) const {
    const double th = folded(theta);
    return th <= mode_.radius ? J_.eval(th) : 1.0;
  }

  /// dJ/dtheta on [0, pi] (antisymmetric across pi/2, zero on the plateau).
  double J_prime(double theta) const {
    check_domain(theta, 0.0, M_PI);
    const double th = folded(theta);
    if (th > mode_.radius) return 0.0;
    const double v = Jp_.eval(th);
    return theta > M_PI / 2 ? -v : v;
  }

  /// J(theta)/sin(theta), finite at both poles (limit J'(0)).
  double jsin(double theta) const {
    const double th = folded(theta);
    return th <= mode_.radius ? u_.eval(th) : 1.0 / std::sin(theta);
  }

  /// u on [0, r] and the running integral of J, used by the fold weight
  /// (g(cos theta) = u(theta) and dG = -J dtheta under t = cos theta).
  double u_at(double theta_leq_r) const { return u_.eval(theta_leq_r); }
  double J_integral_to(double theta_leq_r) const {
    return J_.integral_to(theta_leq_r);
  }
  double J_integral_full() const { return J_.total_integral(); }

 private:
  static void check_domain(double x, double lo, double hi) {
    if (!(x >= lo && x <= hi))
      throw std::domain_error("ExtendedProfile: theta outside [0, pi]");
  }
  double folded(double theta) const {
    check_domain(theta, 0.0, M_PI);
    return theta > M_PI / 2 ? M_PI - theta : theta;
  }

  RadialMode mode_;
  detail::HermiteTable J_, Jp_, u_;
};

inline ExtendedProfile extend_profile(RadialMode mode) {
  return ExtendedProfile(std::move(mode));
}

/// b(theta) = J'(theta)^2 + (n-1) (J/sin)^2; decreasing on (0, pi/2).
inline double b_of_theta(const ExtendedProfile& p, double theta) {
  if (!(theta > 0.0 && theta < M_PI))
    throw std::domain_error("b_of_theta: pole at theta in {0, pi}");
  const double jp = p.J_prime(theta);
  const double js = p.jsin(theta);
  return jp * jp + (p.n() - 1.0) * js * js;
}

/// Rayleigh identity for the ball: mu_1(B_r) = int b sin^{n-1} / int J^2
/// sin^{n-1} over [0, r]. Cross-checks the shooting eigenvalue.
inline double mu1_from_profile(const ExtendedProfile& p,
                               double half_mass_area) {
  const double r_expected = radius_from_area(half_mass_area, p.n());
  if (std::abs(r_expected - p.radius()) > 1e-9)
    throw std::invalid_argument(
        "mu1_from_profile: area does not match the profile radius");
  const RadialMode& m = p.mode();
  const int grid = static_cast<int>(m.theta_grid.size()) - 1;
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= grid; ++k) {
    const double th = m.theta_grid[k];
    const double s = std::sin(th);
    const double sn1 = std::pow(s, m.n - 1);
    const double jp = m.J_prime_values[k];
    const double u = m.u_values[k];
    const double b = jp * jp + (m.n - 1.0) * u * u;
    const double simpson = (k == 0 || k == grid) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    num += simpson * b * sn1;
    den += simpson * (u * s) * (u * s) * sn1;
  }
  return num / den;  // common Simpson factor h/3 cancels
}

/// Even positive weight g with odd primitive G on [-1, 1]. Either derived
/// from a ball profile (the default used by the inequality machinery) or the
/// generic polynomial g(t) = 1 - t^2 used in census experiments.
class FoldWeight {
 public:
  static FoldWeight from_profile(const ExtendedProfile& p) {
    FoldWeight w;
    w.profile_ = std::make_shared<ExtendedProfile>(p);
    w.cos_r_ = std::cos(p.radius());
    w.asin_cos_r_ = std::asin(w.cos_r_);
    w.J_total_ = p.J_integral_full();
    double mg = 1.0 / std::sin(p.radius());
    for (double uv : p.mode().u_values) mg = std::max(mg, std::abs(uv));
    w.max_g_ = mg;
    return w;
  }

  static FoldWeight gegenbauer() { return FoldWeight(); }

  double g(double t) const {
    t = clamp1(t);
    if (!profile_) return 1.0 - t * t;
    const double at = std::abs(t);
    if (at <= cos_r_) return 1.0 / std::sqrt(1.0 - t * t);
    return profile_->u_at(std::acos(at));
  }

  double G(double t) const {
    t = clamp1(t);
    if (!profile_) return t - t * t * t / 3.0;
    const double at = std::abs(t);
    const double sgn = t < 0.0 ? -1.0 : 1.0;
    if (at <= cos_r_) return std::asin(t);
    const double theta = std::acos(at);
    return sgn * (asin_cos_r_ + J_total_ - profile_->J_integral_to(theta));
  }

  double max_abs_g() const { return profile_ ? max_g_ : 1.0; }

  bool profile_backed() const { return static_cast<bool>(profile_); }

 private:
  static double clamp1(double t) { return std::clamp(t, -1.0, 1.0); }

  std::shared_ptr<const ExtendedProfile> profile_;
  double cos_r_ = 0.0, asin_cos_r_ = 0.0, J_total_ = 0.0, max_g_ = 1.0;
};

}  // namespace sphectra
