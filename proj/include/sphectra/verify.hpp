#pragma once

// Randomized verification harness: seeded generators for domains and
// densities, the theorem sweeps (mu_2 bound, complement corollary, harmonic
// mean on S^3), the published-counterexample reproduction, and the fold-pair
// demonstration. Every routine is deterministic in (seed, level, resolution).

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sphectra/config.hpp"
#include "sphectra/fem.hpp"
#include "sphectra/foldmap.hpp"
#include "sphectra/profile.hpp"
#include "sphectra/quadrature.hpp"
#include "sphectra/radial_density.hpp"
#include "sphectra/radial_mode.hpp"
#include "sphectra/report.hpp"
#include "sphectra/rng.hpp"
#include "sphectra/testfunc.hpp"

namespace sphectra {

// ---------------------------------------------------------------------------
// generators

/// Smooth bandlimited pair for census experiments: rho a squared quadratic
/// polynomial of the coordinates (nonnegative), sigma a signed quadratic.
inline std::pair<MassDensity, MassDensity> bandlimited_pair(
    std::shared_ptr<const QuadratureRule> rule, std::uint64_t seed) {
  Rng rng(seed);
  const double a0 = rng.uniform(0.4, 1.2);
  Vec3 a{}, b{};
  double A[3][3], B[3][3];
  for (int k = 0; k < 3; ++k) {
    a[k] = 0.5 * rng.normal();
    b[k] = 0.7 * rng.normal();
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      A[i][j] = A[j][i] = 0.35 * rng.normal();
      B[i][j] = B[j][i] = 0.5 * rng.normal();
    }
  const double b0 = 0.3 * rng.normal();
  auto quad = [](const double M[3][3], const UnitVec2& v) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += M[i][j] * v[i] * v[j];
    return s;
  };
  MassDensity rho = MassDensity::from_sampler(rule, [&](const UnitVec2& v) {
    const double q = a0 + dot<2>(a, v.coords()) + quad(A, v);
    return q * q;
  });
  MassDensity sigma = MassDensity::from_sampler(rule, [&](const UnitVec2& v) {
    return b0 + dot<2>(b, v.coords()) + quad(B, v);
  });
  return {std::move(rho), std::move(sigma)};
}

/// Union of 1..3 caps with centers uniform on S^2 and radii log-uniform in
/// [0.2, 1.2], rejected until the discrete union area lands in the window.
inline DomainSpec random_cap_union(Rng& rng, const SphMesh& probe,
                                   double area_lo, double area_hi) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    DomainSpec spec;
    const int count = 1 + static_cast<int>(rng.uniform() * 3.0);
    for (int c = 0; c < count; ++c)
      spec.caps.emplace_back(rng.unit_vec<2>(), rng.log_uniform(0.2, 1.2));
    double area = 0.0;
    for (int t = 0; t < probe.triangle_count(); ++t)
      if (spec.contains(probe.centroid(t))) area += probe.flat_area(t);
    if (area > area_lo && area < area_hi) return spec;
  }
  throw SolveError("random_cap_union: rejection sampling exhausted");
}

/// Random union of caps inside the complement of B^m (centered at e3), with
/// one global radius scale bisected so the discrete area matches m.
inline DomainSpec complement_constrained_domain(Rng& rng, double m,
                                                const SphMesh& mesh,
                                                double* achieved_area) {
  const double r_m = radius_from_area(m, 2);
  const double guard = 0.05;
  for (int attempt = 0; attempt < 200; ++attempt) {
    DomainSpec spec;
    const int count = 1 + static_cast<int>(rng.uniform() * 3.0);
    for (int c = 0; c < count; ++c) {
      const double radius = rng.log_uniform(0.3, 1.1);
      const double theta_min = r_m + radius + guard;
      if (theta_min >= M_PI - 0.05) continue;
      const double theta = rng.uniform(theta_min, M_PI);
      const double phi = rng.uniform(0.0, 2.0 * M_PI);
      const UnitVec2 center(Vec3{std::sin(theta) * std::cos(phi),
                                 std::sin(theta) * std::sin(phi),
                                 std::cos(theta)});
      spec.caps.emplace_back(center, radius);
    }
    if (spec.caps.empty()) continue;

    auto area_at = [&](double scale) {
      DomainSpec scaled = spec;
      for (auto& cap : scaled.caps) cap.radius = cap.radius * scale;
      double area = 0.0;
      for (int t = 0; t < mesh.triangle_count(); ++t)
        if (scaled.contains(mesh.centroid(t))) area += mesh.flat_area(t);
      return area;
    };
    if (area_at(1.0) < m) continue;  // not enough room, resample

    double lo = 0.05, hi = 1.0;
    if (area_at(lo) > m) continue;
    for (int it = 0; it < 45; ++it) {
      const double mid = 0.5 * (lo + hi);
      (area_at(mid) < m ? lo : hi) = mid;
    }
    const double scale = 0.5 * (lo + hi);
    DomainSpec out = spec;
    for (auto& cap : out.caps) cap.radius = cap.radius * scale;
    if (achieved_area) *achieved_area = area_at(scale);
    return out;
  }
  throw SolveError("complement_constrained_domain: sampling exhausted");
}

/// Radial density on [0, pi] with values in [floor, 1] at 3..5 random
/// breakpoints.
inline RadialDensity random_radial_density(Rng& rng, double floor_val = 1e-3) {
  RadialDensity rho;
  const int interior = 3 + static_cast<int>(rng.uniform() * 3.0);
  std::vector<double> pts{0.0, M_PI};
  for (int i = 0; i < interior; ++i) pts.push_back(rng.uniform(0.15, M_PI - 0.15));
  std::sort(pts.begin(), pts.end());
  rho.breakpoints = pts;
  rho.values.resize(pts.size());
  for (auto& v : rho.values) v = rng.uniform(floor_val, 1.0);
  rho.floor = floor_val;
  return rho;
}

// ---------------------------------------------------------------------------
// theorem sweeps

namespace detail {

inline VerificationRecord fem_vs_radial_record(const DomainSpec& spec,
                                               const std::string& what,
                                               int eig_index, int level,
                                               double area_for_bound_factor,
                                               std::uint64_t seed,
                                               const Config& cfg) {
  VerificationRecord rec;
  ConvergenceReport rep = neumann_eigs(spec, level, eig_index, seed,
                                       cfg.tol.gevp_residual);
  double value = rep.fine.eigenvalues[eig_index];
  double margin = 3.0 * rep.error_estimate[eig_index];
  double bound_area = rep.area_fine * area_for_bound_factor;
  double bound = solve_ball_mode(2, radius_from_area(bound_area, 2)).mu;

  // inconclusive inside one margin: rerun one level higher for the verdict
  if (value > bound && value <= bound + margin && level < 8) {
    rep = neumann_eigs(spec, level + 1, eig_index, seed, cfg.tol.gevp_residual);
    value = rep.fine.eigenvalues[eig_index];
    margin = 3.0 * rep.error_estimate[eig_index];
    bound_area = rep.area_fine * area_for_bound_factor;
    bound = solve_ball_mode(2, radius_from_area(bound_area, 2)).mu;
    rec.refined = true;
  }
  rec.description = what;
  rec.value = value;
  rec.value_oracle = "fem";
  rec.bound = bound;
  rec.bound_oracle = "radial";
  rec.margin = margin;
  rec.pass = value <= bound + margin;
  return rec;
}

}  // namespace detail

/// mu_2(Omega) <= mu_1(B^{|Omega|/2}) over seeded random cap unions.
inline std::vector<VerificationRecord> verify_thm12(int trials, std::uint64_t seed,
                                                    int level, const Config& cfg) {
  Rng rng(seed);
  const SphMesh probe = build_icosphere(3);
  std::vector<VerificationRecord> records;
  for (int t = 0; t < trials; ++t) {
    const DomainSpec spec =
        random_cap_union(rng, probe, 0.5, 0.9 * 4.0 * M_PI);
    std::ostringstream what;
    what << "thm12 trial " << t << " (" << spec.caps.size() << " caps)";
    records.push_back(detail::fem_vs_radial_record(spec, what.str(), 2, level,
                                                   0.5, seed + t, cfg));
  }
  return records;
}

/// Equality case of the mu_2 bound: two equal disjoint caps match the ball
/// value within the stated relative tolerance.
inline VerificationRecord verify_thm12_equality(int level, const Config& cfg,
                                                double total_area = 4.0,
                                                double rel_tol = 0.01) {
  const double r = radius_from_area(total_area / 2.0, 2);
  DomainSpec spec;
  spec.caps.emplace_back(UnitVec2(Vec3{0.31, -0.25, 0.92}), r);
  spec.caps.emplace_back(UnitVec2(Vec3{-0.31, 0.25, -0.92}), r);
  const ConvergenceReport rep =
      neumann_eigs(spec, level, 2, 2024, cfg.tol.gevp_residual);
  const double bound = solve_ball_mode(2, radius_from_area(
                                              rep.area_fine / 2.0, 2)).mu;
  VerificationRecord rec;
  rec.description = "thm12 equality case (two equal disjoint caps)";
  rec.value = rep.fine.eigenvalues[2];
  rec.value_oracle = "fem";
  rec.bound = bound;
  rec.bound_oracle = "radial";
  rec.margin = rel_tol * bound;
  rec.pass = std::abs(rec.value - bound) <= rec.margin;
  return rec;
}

/// mu_1(Omega) <= mu_1(B^m) for Omega in the complement of B^m, |Omega| = m.
inline std::vector<VerificationRecord> verify_cor13(int trials, std::uint64_t seed,
                                                    int level, const Config& cfg) {
  Rng rng(seed);
  const SphMesh fine = build_icosphere(level);
  std::vector<VerificationRecord> records;
  for (int t = 0; t < trials; ++t) {
    const double m = rng.uniform(0.8, 5.8);
    double area = 0.0;
    const DomainSpec spec = complement_constrained_domain(rng, m, fine, &area);

    ConvergenceReport rep =
        neumann_eigs(spec, level, 1, seed + t, cfg.tol.gevp_residual);
    double value = rep.fine.eigenvalues[1];
    double margin = 3.0 * rep.error_estimate[1];
    const double bound = solve_ball_mode(2, radius_from_area(m, 2)).mu;
    VerificationRecord rec;
    if (value > bound && value <= bound + margin && level < 8) {
      rep = neumann_eigs(spec, level + 1, 1, seed + t, cfg.tol.gevp_residual);
      value = rep.fine.eigenvalues[1];
      margin = 3.0 * rep.error_estimate[1];
      rec.refined = true;
    }
    std::ostringstream what;
    what << "cor13 trial " << t << " m=" << m << " |Omega|=" << area
         << " components=" << rep.components;
    rec.description = what.str();
    rec.value = value;
    rec.value_oracle = "fem";
    rec.bound = bound;
    rec.bound_oracle = "radial";
    rec.margin = margin;
    rec.pass = value <= bound + margin;
    records.push_back(rec);
  }
  return records;
}

/// 1/mu_2 + 1/mu_3 >= 2 / mu_1(B^{mass/2}) on S^3 for radial densities.
/// Recorded as: bound side <= harmonic side + margin.
inline std::vector<VerificationRecord> verify_harmonic(int trials,
                                                       std::uint64_t seed,
                                                       const Config& cfg) {
  std::vector<VerificationRecord> records;

  {  // uniform density: exact equality at 2/3
    RadialDensity uni;
    uni.breakpoints = {0.0, M_PI};
    uni.values = {1.0, 1.0};
    uni.floor = 1.0;
    const DensitySpectrum spec = solve_radial_density(
        3, uni, 3, cfg.res.ell_max, cfg.res.density_intervals);
    const double lhs = 1.0 / spec.mu_nontrivial(2) + 1.0 / spec.mu_nontrivial(3);
    const double bound_side =
        2.0 / solve_ball_mode(3, radius_from_area(spec.mass / 2.0, 3)).mu;
    VerificationRecord rec;
    rec.description = "harmonic-mean uniform density on S^3 (equality 2/3)";
    rec.value = std::abs(lhs - bound_side);
    rec.value_oracle = "radial-density";
    rec.bound = 0.0;
    rec.bound_oracle = "radial-shooting";
    rec.margin = 1e-6;
    rec.pass = rec.value <= rec.margin && std::abs(lhs - 2.0 / 3.0) <= 1e-6;
    records.push_back(rec);
  }

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const RadialDensity rho = random_radial_density(rng);
    const DensitySpectrum spec = solve_radial_density(
        3, rho, 3, cfg.res.ell_max, cfg.res.density_intervals);
    const double harmonic =
        1.0 / spec.mu_nontrivial(2) + 1.0 / spec.mu_nontrivial(3);
    const double bound_side =
        2.0 / solve_ball_mode(3, radius_from_area(spec.mass / 2.0, 3)).mu;
    std::ostringstream what;
    what << "harmonic trial " << t << " mass=" << spec.mass;
    VerificationRecord rec;
    rec.description = what.str();
    rec.value = bound_side;
    rec.value_oracle = "radial-shooting";
    rec.bound = harmonic;
    rec.bound_oracle = "radial-density";
    rec.margin = 1e-4;
    rec.pass = rec.value <= rec.bound + rec.margin;
    records.push_back(rec);
  }
  return records;
}

// ---------------------------------------------------------------------------
// counterexample reproduction

struct CounterexampleReport {
  double mass = 0.0;
  double mu1_density = 0.0;
  double mu1_ball = 0.0;
  bool mass_ok = false, value_ok = false, strict = false;
  bool pass() const { return mass_ok && value_ok && strict; }
};

/// The full-support density with mass 6 whose first eigenvalue beats the cap
/// of the same mass; optionally writes the theta-profile plot.
inline CounterexampleReport reproduce_counterexample(
    const Config& cfg, const RadialDensity& rho,
    const std::string& svg_path = "") {
  CounterexampleReport rep;
  rep.mass = rho.mass(2);
  const DensitySpectrum spec = solve_radial_density(
      2, rho, 1, cfg.res.ell_max, cfg.res.density_intervals);
  rep.mu1_density = spec.mu_nontrivial(1);
  rep.mu1_ball = solve_ball_mode(2, radius_from_area(rep.mass, 2)).mu;
  rep.mass_ok = std::abs(rep.mass - 6.0) <= 1e-3;
  rep.value_ok = std::abs(rep.mu1_density - 2.213185) <= 2e-3;
  rep.strict = rep.mu1_density > rep.mu1_ball;
  if (!svg_path.empty()) {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 400; ++i) {
      const double th = M_PI * i / 400.0;
      xs.push_back(th);
      ys.push_back(rho(th));
    }
    write_svg_plot(xs, ys, "radial density vs polar angle", svg_path);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// fold-pair demonstration

struct FoldDemoReport {
  FoldCritPair pair;
  double mass = 0.0;
  double scale = 0.0;  // mass * max|g|, the orthogonality unit
  double orth_const_1 = 0.0, orth_const_2 = 0.0;  // |int phi_xi rho|, frame
  double orth_u1_1 = 0.0, orth_u1_2 = 0.0;        // |int phi_xi u1 rho|
  double orth_u2_basis = 0.0;                     // |int phi_xi2 u2 rho|
  bool basis_degenerate = false;
  double rayleigh_1 = 0.0, rayleigh_2 = 0.0, rayleigh_sum = 0.0;
  double bound = 0.0;   // mu_1(B^{mass/2}), radial oracle
  double mu2_fem = 0.0;

  nlohmann::json to_json() const {
    return nlohmann::json{{"pair", pair.to_json()},
                          {"mass", mass},
                          {"scale", scale},
                          {"orth_const", {orth_const_1, orth_const_2}},
                          {"orth_u1", {orth_u1_1, orth_u1_2}},
                          {"orth_u2_basis", orth_u2_basis},
                          {"basis_degenerate", basis_degenerate},
                          {"rayleigh", {rayleigh_1, rayleigh_2, rayleigh_sum}},
                          {"bound_mu1_half_mass", bound},
                          {"mu2_fem", mu2_fem}};
  }
};

inline FoldSolveConfig fold_config(const Config& cfg) {
  FoldSolveConfig fc;
  fc.diagonal_margin = cfg.tol.diagonal_margin;
  fc.residual_gate = cfg.tol.fold_residual;
  fc.newton_target = cfg.tol.newton_target;
  fc.continuation_steps = cfg.res.continuation_steps;
  fc.newton_max_iter = cfg.res.newton_max_iter;
  fc.dedup_distance = cfg.tol.dedup_distance;
  fc.condition_limit = cfg.tol.condition_limit;
  fc.identity_tol = cfg.tol.quad_identity;
  return fc;
}

/// rho = 1_Omega, sigma = u_1 1_Omega: find the critical pair, select the
/// tangent basis, evaluate orthogonality residuals and the Rayleigh numbers.
inline FoldDemoReport fold_demo(const DomainSpec& spec, int level,
                                std::uint64_t seed, const Config& cfg) {
  FoldDemoReport rep;
  const IcosphereHierarchy hier(level);
  const SphMesh& mesh = hier.finest();
  const DomainMask mask = domain_mask(mesh, spec);
  const FemSystem sys = assemble(mesh, mask);
  const SpectralResult fem = solve_gevp(sys, 2, seed, cfg.tol.gevp_residual);
  rep.mu2_fem = fem.eigenvalues[2];

  auto rule = std::make_shared<const QuadratureRule>(
      product_rule(cfg.res.quad_theta, cfg.res.quad_phi));
  const MassDensity rho = MassDensity::from_sampler(
      rule, [&](const UnitVec2& v) { return spec.contains(v) ? 1.0 : 0.0; },
      MassDensity::Provenance::cap_indicator);
  rep.mass = rho.mass;

  const double half_r = radius_from_area(rep.mass / 2.0, 2);
  const RadialMode half_mode = solve_ball_mode(2, half_r);
  const FoldWeight W = FoldWeight::from_profile(extend_profile(half_mode));
  rep.bound = half_mode.mu;
  rep.scale = rep.mass * W.max_abs_g();

  const MassDensity sigma =
      mesh_weighted_density(rule, hier, fem.eigenvectors[1], spec);
  rep.pair = find_fold_pair(rho, sigma, W, seed, fold_config(cfg));

  std::vector<double> u1_nodes(rule->size()), u2_nodes(rule->size());
  for (std::size_t i = 0; i < rule->size(); ++i) {
    u1_nodes[i] = hier.interpolate(fem.eigenvectors[1], rule->nodes[i]);
    u2_nodes[i] = hier.interpolate(fem.eigenvectors[2], rule->nodes[i]);
  }

  const TangentFrame frame = tangent_frame(rep.pair.z);
  const TestFunction phi1{rep.pair, frame.e1, W, cfg.tol.quad_identity};
  const TestFunction phi2{rep.pair, frame.e2, W, cfg.tol.quad_identity};
  rep.orth_const_1 = std::abs(weighted_integral(rho, phi1));
  rep.orth_const_2 = std::abs(weighted_integral(rho, phi2));
  rep.orth_u1_1 = std::abs(weighted_integral(rho, u1_nodes, phi1));
  rep.orth_u1_2 = std::abs(weighted_integral(rho, u1_nodes, phi2));

  const BasisSelection basis = select_basis(
      rho, u2_nodes, rep.pair, W, cfg.tol.orthogonality_rel * rep.scale);
  rep.basis_degenerate = basis.degenerate;
  const TestFunction phi_b1{rep.pair, basis.xi1, W, cfg.tol.quad_identity};
  const TestFunction phi_b2{rep.pair, basis.xi2, W, cfg.tol.quad_identity};
  rep.orth_u2_basis = std::abs(weighted_integral(rho, u2_nodes, phi_b2));

  const int dofs = static_cast<int>(sys.vertex_of_dof.size());
  Eigen::VectorXd x1(dofs), x2(dofs);
  for (int d = 0; d < dofs; ++d) {
    const UnitVec2& v = mesh.vertices[sys.vertex_of_dof[d]];
    x1(d) = phi_b1(v);
    x2(d) = phi_b2(v);
  }
  const double n1 = x1.dot(sys.K * x1), d1 = x1.dot(sys.M * x1);
  const double n2 = x2.dot(sys.K * x2), d2 = x2.dot(sys.M * x2);
  rep.rayleigh_1 = n1 / d1;
  rep.rayleigh_2 = n2 / d2;
  rep.rayleigh_sum = (n1 + n2) / (d1 + d2);
  return rep;
}

// ---------------------------------------------------------------------------
// exploratory sweep beyond the hemisphere (observational, no assertions)

struct Q2Row {
  double area = 0.0, radius = 0.0, mu1_fem = 0.0;
};

inline std::vector<Q2Row> explore_q2(int level, int steps, std::uint64_t seed,
                                     const Config& cfg) {
  std::vector<Q2Row> rows;
  for (int s = 1; s <= steps; ++s) {
    Q2Row row;
    row.area = 4.0 * M_PI * s / (steps + 1.0);
    row.radius = radius_from_area(row.area, 2);
    const DomainSpec spec = DomainSpec::single_cap(UnitVec2(Vec3{0.2, -0.3, 0.93}),
                                                   row.radius);
    const SphMesh mesh = build_icosphere(level);
    const SpectralResult res =
        solve_gevp(assemble(mesh, domain_mask(mesh, spec)), 1, seed,
                   cfg.tol.gevp_residual);
    row.mu1_fem = res.eigenvalues[1];
    rows.push_back(row);
  }
  return rows;
}

inline void write_q2_csv(const std::vector<Q2Row>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "area,radius,mu1_fem\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.area << ',' << r.radius << ',' << r.mu1_fem << '\n';
}

}  // namespace sphectra
