#pragma once

// Neumann spectrum of a radially symmetric density on S^n. Separation with
// degree-l spherical harmonics reduces the weighted Rayleigh quotient
//
//   int rho |grad u|^2 / int rho u^2
//
// to one Sturm-Liouville band per l:
//
//   int rho(theta) sin^{n-1}(theta) [ f'^2 + l(l+n-2) f^2 / sin^2 ] dtheta
//   -----------------------------------------------------------------,
//   int rho(theta) sin^{n-1}(theta) f^2 dtheta
//
// discretized with P1 elements on a pole-graded grid that contains every
// density breakpoint. Bands merge with the dimension of the degree-l
// harmonic space on S^{n-1} as multiplicity.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphectra/quadrature.hpp"
#include "sphectra/radial_mode.hpp"
#include "sphectra/sphere_core.hpp"
#include "sphectra/tridiag.hpp"

namespace sphectra {

/// Piecewise-linear radial density rho(theta) on [0, pi] with a positive
/// essential floor when it stands for a full-support density.
struct RadialDensity {
  std::vector<double> breakpoints;  // increasing, breakpoints[0]=0, back=pi
  std::vector<double> values;       // nonnegative, same size
  double floor = 0.0;

  void validate() const {
    if (breakpoints.size() < 2 || breakpoints.size() != values.size())
      throw std::invalid_argument("RadialDensity: need matching breakpoint/value lists");
    if (std::abs(breakpoints.front()) > 1e-12 ||
        std::abs(breakpoints.back() - M_PI) > 1e-6)
      throw std::invalid_argument("RadialDensity: breakpoints must span [0, pi]");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (!(breakpoints[i] > breakpoints[i - 1]))
        throw std::invalid_argument("RadialDensity: breakpoints must increase");
    for (double v : values)
      if (!(v >= 0.0))
        throw std::invalid_argument("RadialDensity: values must be nonnegative");
  }

  /// The section-5 admissibility: 0 < floor <= rho <= 1 everywhere.
  void validate_full_support() const {
    validate();
    if (!(floor > 0.0))
      throw std::invalid_argument("RadialDensity: full-support density needs floor > 0");
    for (double v : values)
      if (v < floor - 1e-15 || v > 1.0 + 1e-12)
        throw std::invalid_argument("RadialDensity: values must lie in [floor, 1]");
  }

  double operator()(double theta) const {
    if (theta <= breakpoints.front()) return values.front();
    if (theta >= breakpoints.back()) return values.back();
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), theta);
    const std::size_t k = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    const double s =
        (theta - breakpoints[k]) / (breakpoints[k + 1] - breakpoints[k]);
    return values[k] + s * (values[k + 1] - values[k]);
  }

  /// Total mass on S^n: |S^{n-1}| int rho sin^{n-1}.
  double mass(int n) const {
    static const double gx[8] = {0.01985507175123188, 0.10166676129318664,
                                 0.2372337950418355,  0.40828267875217505,
                                 0.5917173212478249,  0.7627662049581645,
                                 0.8983332387068134,  0.9801449282487681};
    static const double gw[8] = {0.05061426814518813, 0.11119051722668723,
                                 0.15685332293894372, 0.18134189168918097,
                                 0.18134189168918097, 0.15685332293894372,
                                 0.11119051722668723, 0.05061426814518813};
    const double ring = sphere_area(n - 1);
    double total = 0.0;
    for (std::size_t seg = 0; seg + 1 < breakpoints.size(); ++seg) {
      const double a = breakpoints[seg], b = breakpoints[seg + 1];
      const double h = b - a;
      // split long segments so the Gauss rule resolves sin^{n-1}
      const int pieces = 1 + static_cast<int>(h / 0.2);
      for (int p = 0; p < pieces; ++p) {
        const double pa = a + h * p / pieces;
        const double ph = h / pieces;
        for (int q = 0; q < 8; ++q) {
          const double th = pa + gx[q] * ph;
          total += gw[q] * ph * (*this)(th)*std::pow(std::sin(th), n - 1);
        }
      }
    }
    return ring * total;
  }

  nlohmann::json to_json() const {
    return nlohmann::json{
        {"breakpoints", breakpoints}, {"values", values}, {"floor", floor}};
  }

  static RadialDensity from_json(const nlohmann::json& j) {
    RadialDensity d;
    d.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    d.values = j.at("values").get<std::vector<double>>();
    d.floor = j.at("floor").get<double>();
    d.validate();
    return d;
  }

  static RadialDensity load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open density file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write density file: " + path);
    out << to_json().dump(2) << '\n';
  }
};

/// The piecewise-affine counterexample density: full support on S^2,
/// mass 6, first eigenvalue above the cap of the same mass.
inline RadialDensity rho_pl() {
  RadialDensity d;
  d.breakpoints = {0.0, 1.3, 1.4, 3.14159265};
  d.values = {1.0, 1.0, 0.19480547, 0.04829935};
  d.floor = 0.04829935;
  // keep the documented endpoint but make the grid span [0, pi] exactly
  d.breakpoints.back() = M_PI;
  return d;
}

struct DensityEig {
  double mu = 0.0;
  int ell = 0;
  double residual = 0.0;
  std::shared_ptr<const std::vector<double>> radial;  // node samples of f
};

/// Merged spectrum of a radial density: mu_0 ~ 0 first, then the nontrivial
/// eigenvalues in ascending order with harmonic multiplicities expanded.
struct DensitySpectrum {
  int n = 2;
  double mass = 0.0;
  std::vector<double> grid;        // theta nodes shared by all bands
  std::vector<DensityEig> modes;   // sorted, modes[0] is the constant mode
  bool truncation_warning = false; // k-th value too close to the last band

  double mu(std::size_t k) const { return modes.at(k).mu; }

  /// k-th nontrivial eigenvalue (k = 1 is the first one).
  double mu_nontrivial(std::size_t k) const { return modes.at(k).mu; }

  void write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "index,ell,mu,residual\n";
    out.precision(17);
    for (std::size_t i = 0; i < modes.size(); ++i)
      out << i << ',' << modes[i].ell << ',' << modes[i].mu << ','
          << modes[i].residual << '\n';
  }
};

namespace detail {

/// Dimension of the degree-l spherical harmonic space on S^{n-1}.
inline int harmonic_multiplicity(int n, int ell) {
  if (ell == 0) return 1;
  if (n == 2) return 2;
  // binom(l+n-2, l) (2l+n-2)/(l+n-2)
  long long binom = 1;
  for (int i = 1; i <= ell; ++i)
    binom = binom * (n - 2 + i) / i;  // exact: consecutive products
  return static_cast<int>(binom * (2 * ell + n - 2) / (ell + n - 2));
}

// Pole-graded theta grid containing every breakpoint.
inline std::vector<double> graded_grid(const std::vector<double>& breaks,
                                       int intervals) {
  const double kappa = 0.8;
  std::vector<double> grid;
  grid.reserve(intervals + breaks.size());
  for (int i = 0; i <= intervals; ++i) {
    const double x = static_cast<double>(i) / intervals;
    grid.push_back(M_PI * (x - kappa * std::sin(2.0 * M_PI * x) / (2.0 * M_PI)));
  }
  for (double b : breaks) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  // collapse near-duplicates (keep breakpoints, they were pushed last but
  // equal values dedup either way)
  std::vector<double> out;
  out.push_back(0.0);
  const double min_h = 0.05 * M_PI / intervals;
  for (double g : grid) {
    if (g - out.back() > min_h) out.push_back(g);
  }
  if (std::abs(out.back() - M_PI) > 1e-12) out.push_back(M_PI);
  // breakpoints may have been collapsed by the min_h rule; force them back,
  // except within 1e-8 of an existing node (a written-out pi constant, say)
  // where a sliver element would buy nothing
  for (double b : breaks) {
    auto it = std::lower_bound(out.begin(), out.end(), b - 1e-8);
    if (it == out.end() || std::abs(*it - b) > 1e-8) out.insert(it, b);
  }
  return out;
}

struct BandMatrices {
  Tridiag A, B;
  bool dirichlet = false;  // poles constrained (l >= 1)
};

// P1 assembly of one angular band.
inline BandMatrices assemble_band(const RadialDensity& rho, int n, int ell,
                                  const std::vector<double>& grid) {
  static const double gx[4] = {0.06943184420297371, 0.33000947820757187,
                               0.6699905217924281, 0.9305681557970263};
  static const double gw[4] = {0.17392742256872693, 0.3260725774312731,
                               0.3260725774312731, 0.17392742256872693};
  const int nodes = static_cast<int>(grid.size());
  const bool dirichlet = ell >= 1;
  const int dofs = dirichlet ? nodes - 2 : nodes;
  const double cl = static_cast<double>(ell) * (ell + n - 2);

  BandMatrices bm;
  bm.dirichlet = dirichlet;
  bm.A.diag.assign(dofs, 0.0);
  bm.A.off.assign(dofs - 1, 0.0);
  bm.B.diag.assign(dofs, 0.0);
  bm.B.off.assign(dofs - 1, 0.0);

  auto dof_of = [&](int node) { return dirichlet ? node - 1 : node; };
  auto in_range = [&](int node) {
    return dirichlet ? (node >= 1 && node <= nodes - 2) : true;
  };

  for (int e = 0; e + 1 < nodes; ++e) {
    const double a = grid[e], b = grid[e + 1];
    const double h = b - a;
    double k00 = 0, k01 = 0, k11 = 0, m00 = 0, m01 = 0, m11 = 0;
    for (int q = 0; q < 4; ++q) {
      const double th = a + gx[q] * h;
      const double s = std::sin(th);
      const double w = gw[q] * h * rho(th);
      const double sn1 = std::pow(s, n - 1);
      const double grad = w * sn1 / (h * h);
      k00 += grad;
      k01 -= grad;
      k11 += grad;
      const double f0 = 1.0 - gx[q], f1 = gx[q];
      if (cl > 0.0) {
        // sin^{n-3}: integrable against hats vanishing at the poles
        const double pot = w * cl * sn1 / (s * s);
        k00 += pot * f0 * f0;
        k01 += pot * f0 * f1;
        k11 += pot * f1 * f1;
      }
      const double ms = w * sn1;
      m00 += ms * f0 * f0;
      m01 += ms * f0 * f1;
      m11 += ms * f1 * f1;
    }
    if (in_range(e)) {
      bm.A.diag[dof_of(e)] += k00;
      bm.B.diag[dof_of(e)] += m00;
    }
    if (in_range(e + 1)) {
      bm.A.diag[dof_of(e + 1)] += k11;
      bm.B.diag[dof_of(e + 1)] += m11;
    }
    if (in_range(e) && in_range(e + 1)) {
      bm.A.off[dof_of(e)] += k01;
      bm.B.off[dof_of(e)] += m01;
    }
  }
  return bm;
}

}  // namespace detail

/// First k nontrivial eigenvalues of the density problem, merged over the
/// bands l = 0..ell_max with harmonic multiplicities. modes[0] is the
/// constant mode (mu ~ 0); modes[1..k] are the requested values.
inline DensitySpectrum solve_radial_density(int n, const RadialDensity& rho,
                                            int k, int ell_max = 8,
                                            int intervals = 4096) {
  if (n < 2) throw std::domain_error("solve_radial_density: n must be >= 2");
  if (k < 1 || ell_max < 2)
    throw std::invalid_argument("solve_radial_density: need k >= 1, ell_max >= 2");
  rho.validate_full_support();

  DensitySpectrum spec;
  spec.n = n;
  spec.mass = rho.mass(n);
  spec.grid = detail::graded_grid(rho.breakpoints, intervals);
  const int nodes = static_cast<int>(spec.grid.size());

  const int per_band = std::min(nodes - 2, k + 2);
  std::vector<DensityEig> merged;
  double last_band_min = 0.0;
  for (int ell = 0; ell <= ell_max; ++ell) {
    const detail::BandMatrices bm = detail::assemble_band(rho, n, ell, spec.grid);
    const auto pairs = lowest_pairs(bm.A, bm.B, per_band);
    if (ell == ell_max) last_band_min = pairs.front().value;
    const int mult = detail::harmonic_multiplicity(n, ell);
    for (const auto& pr : pairs) {
      auto samples = std::make_shared<std::vector<double>>();
      samples->reserve(nodes);
      if (bm.dirichlet) samples->push_back(0.0);
      samples->insert(samples->end(), pr.vector.begin(), pr.vector.end());
      if (bm.dirichlet) samples->push_back(0.0);
      for (int m = 0; m < mult; ++m)
        merged.push_back(DensityEig{pr.value, ell, pr.residual, samples});
    }
  }
  std::sort(merged.begin(), merged.end(),
            [](const DensityEig& a, const DensityEig& b) { return a.mu < b.mu; });

  if (std::abs(merged.front().mu) > 1e-9 * std::max(1.0, merged[1].mu))
    throw SolveError("solve_radial_density: constant mode not resolved to zero");
  const int keep = std::min<int>(static_cast<int>(merged.size()), k + 1);
  spec.modes.assign(merged.begin(), merged.begin() + keep);
  spec.truncation_warning = spec.modes.back().mu > 0.95 * last_band_min;
  return spec;
}

/// Spectrum prefix of two disjoint equal caps: {0, 0} followed by the ball
/// eigenvalue with doubled multiplicity 2n.
inline std::vector<double> two_cap_spectrum(int n, double area_each, int k) {
  if (!(2.0 * area_each < sphere_area(n)))
    throw std::domain_error("two_cap_spectrum: caps must fit disjointly");
  if (k < 1 || k > 2 * n + 2)
    throw std::invalid_argument(
        "two_cap_spectrum: only the {0, 0, mu_1 x 2n} prefix is available");
  const RadialMode mode = solve_ball_mode(n, radius_from_area(area_each, n));
  std::vector<double> eigs{0.0, 0.0};
  for (int i = 0; i < 2 * n; ++i) eigs.push_back(mode.mu);
  eigs.resize(k + 1);
  return eigs;
}

}  // namespace sphectra
