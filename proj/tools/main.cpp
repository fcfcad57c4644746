// Command-line harness: eigenvalue solvers, the published-value
// reproduction, and the randomized inequality sweeps. Every subcommand is
// deterministic in (seed, level, resolution) and exits nonzero when any
// assertion fails.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "sphectra/config.hpp"
#include "sphectra/fem.hpp"
#include "sphectra/foldmap.hpp"
#include "sphectra/profile.hpp"
#include "sphectra/radial_density.hpp"
#include "sphectra/radial_mode.hpp"
#include "sphectra/report.hpp"
#include "sphectra/verify.hpp"

namespace fs = std::filesystem;
using namespace sphectra;

namespace {

struct CommonOpts {
  std::string out_dir = "out";
  std::string tol_file;
  int n = 2;
  int level = 0;  // 0: use config default
  int trials = 0;
  std::uint64_t seed = 1;
};

Config make_config(const CommonOpts& opts) {
  Config cfg;
  if (!opts.tol_file.empty()) load_overrides(cfg, opts.tol_file);
  if (opts.level > 0) cfg.res.mesh_level = opts.level;
  return cfg;
}

fs::path ensure_out(const CommonOpts& opts) {
  fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  return dir;
}

int report_records(const std::vector<VerificationRecord>& records,
                   const fs::path& csv) {
  write_records_csv(records, csv.string());
  int failures = 0;
  for (const auto& r : records) {
    std::printf("%s  %s: value=%.9g bound=%.9g margin=%.3g%s\n",
                r.pass ? "[PASS]" : "[FAIL]", r.description.c_str(), r.value,
                r.bound, r.margin, r.refined ? " (refined)" : "");
    if (!r.pass) ++failures;
  }
  std::printf("records written to %s\n", csv.string().c_str());
  return failures;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_level = true,
                bool with_trials = false) {
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--tol-file", opts.tol_file, "JSON tolerance overrides");
  cmd->add_option("--seed", opts.seed, "RNG seed for randomized runs");
  if (with_level) cmd->add_option("--level", opts.level, "icosphere level");
  if (with_trials) cmd->add_option("--trials", opts.trials, "trial count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neumann eigenvalues on the sphere: solvers and verification"};
  app.require_subcommand(1);

  CommonOpts opts;
  int failures = 0;

  // ---- ball-eig ----------------------------------------------------------
  auto* ball = app.add_subcommand("ball-eig", "mu_1 of a geodesic ball");
  double ball_r = 0.0, ball_area = 0.0;
  ball->add_option("--n", opts.n, "sphere dimension");
  ball->add_option("--r", ball_r, "geodesic radius");
  ball->add_option("--area", ball_area, "cap area (alternative to --r)");
  add_common(ball, opts, false);
  ball->callback([&] {
    const Config cfg = make_config(opts);
    const double r = ball_area > 0.0 ? radius_from_area(ball_area, opts.n) : ball_r;
    const RadialMode mode = solve_ball_mode(opts.n, r, cfg.res.radial_grid);
    std::printf("n=%d r=%.12g area=%.12g mu1=%.12g\n", opts.n, r,
                cap_area(r, opts.n), mode.mu);
    const fs::path dir = ensure_out(opts);
    std::ofstream csv(dir / "ball_eig.csv");
    csv << "n,r,area,mu1\n";
    csv.precision(17);
    csv << opts.n << ',' << r << ',' << cap_area(r, opts.n) << ',' << mode.mu
        << '\n';
  });

  // ---- density-eig -------------------------------------------------------
  auto* deig = app.add_subcommand("density-eig",
                                  "spectrum of a radial density (JSON file)");
  std::string rho_file;
  int k_count = 3;
  deig->add_option("--n", opts.n, "sphere dimension");
  deig->add_option("--rho-file", rho_file, "density JSON; default table density");
  deig->add_option("--k", k_count, "nontrivial eigenvalues to report");
  add_common(deig, opts, false);
  deig->callback([&] {
    const Config cfg = make_config(opts);
    const RadialDensity rho =
        rho_file.empty() ? rho_pl() : RadialDensity::load(rho_file);
    const DensitySpectrum spec = solve_radial_density(
        opts.n, rho, k_count, cfg.res.ell_max, cfg.res.density_intervals);
    std::printf("mass=%.9g\n", spec.mass);
    for (int k = 1; k <= k_count; ++k)
      std::printf("mu_%d = %.9g (ell=%d)\n", k, spec.mu_nontrivial(k),
                  spec.modes[k].ell);
    if (spec.truncation_warning)
      std::printf("warning: requested band close to the ell cutoff\n");
    const fs::path dir = ensure_out(opts);
    spec.write_csv((dir / "density_spectrum.csv").string());
  });

  // ---- fem-eig -----------------------------------------------------------
  auto* feig = app.add_subcommand("fem-eig", "mesh eigenvalues of a domain");
  std::string domain_file;
  int fem_k = 3;
  feig->add_option("--domain-file", domain_file,
                   "domain spec JSON; default full sphere");
  feig->add_option("--k", fem_k, "eigenvalues beyond the constant");
  add_common(feig, opts, true);
  feig->callback([&] {
    const Config cfg = make_config(opts);
    const DomainSpec spec = domain_file.empty() ? DomainSpec::full_sphere()
                                                : DomainSpec::load(domain_file);
    const ConvergenceReport rep = neumann_eigs(spec, cfg.res.mesh_level, fem_k,
                                               opts.seed, cfg.tol.gevp_residual);
    for (int k = 0; k <= fem_k; ++k)
      std::printf("mu_%d = %.9g (extrapolated %.9g, estimate %.2g)\n", k,
                  rep.fine.eigenvalues[k], rep.extrapolated[k],
                  rep.error_estimate[k]);
    std::printf("area=%.9g components=%d\n", rep.area_fine, rep.components);
    const fs::path dir = ensure_out(opts);
    write_spectrum_csv(rep.fine, (dir / "fem_spectrum.csv").string());
  });

  // ---- fold-demo ---------------------------------------------------------
  auto* fdemo = app.add_subcommand(
      "fold-demo", "critical pair, basis selection and Rayleigh numbers");
  std::string fold_domain;
  fdemo->add_option("--domain-file", fold_domain,
                    "domain spec JSON; default a generic two-cap union");
  add_common(fdemo, opts, true);
  fdemo->callback([&] {
    const Config cfg = make_config(opts);
    DomainSpec spec;
    if (fold_domain.empty()) {
      spec.caps.emplace_back(UnitVec2(Vec3{0.25, 0.1, 0.96}), 0.85);
      spec.caps.emplace_back(UnitVec2(Vec3{-0.5, 0.6, -0.62}), 0.7);
    } else {
      spec = DomainSpec::load(fold_domain);
    }
    const FoldDemoReport rep = fold_demo(spec, cfg.res.mesh_level, opts.seed, cfg);
    const double tol = cfg.tol.orthogonality_rel * rep.scale;
    const bool ok = rep.pair.residual_rho + rep.pair.residual_sigma <=
                        cfg.tol.fold_residual &&
                    rep.orth_const_1 <= tol && rep.orth_const_2 <= tol &&
                    rep.orth_u1_1 <= tol && rep.orth_u1_2 <= tol &&
                    rep.orth_u2_basis <= tol;
    std::printf("%s fold pair: residuals %.3g + %.3g, orthogonality <= %.3g "
                "(unit %.3g)\n",
                ok ? "[PASS]" : "[FAIL]", rep.pair.residual_rho,
                rep.pair.residual_sigma,
                std::max({rep.orth_const_1, rep.orth_const_2, rep.orth_u1_1,
                          rep.orth_u1_2, rep.orth_u2_basis}),
                tol);
    std::printf("rayleigh: %0.9g %0.9g sum %0.9g; bound %0.9g; mu2_fem %0.9g\n",
                rep.rayleigh_1, rep.rayleigh_2, rep.rayleigh_sum, rep.bound,
                rep.mu2_fem);
    const fs::path dir = ensure_out(opts);
    std::ofstream json(dir / "fold_demo.json");
    json << rep.to_json().dump(2) << '\n';
    if (!ok) ++failures;
  });

  // ---- verify-thm12 ------------------------------------------------------
  auto* thm12 = app.add_subcommand(
      "verify-thm12", "mu_2(Omega) <= mu_1(B^{|Omega|/2}) over random domains");
  add_common(thm12, opts, true, true);
  thm12->callback([&] {
    const Config cfg = make_config(opts);
    const int trials = opts.trials > 0 ? opts.trials : 25;
    std::vector<VerificationRecord> records =
        verify_thm12(trials, opts.seed, cfg.res.mesh_level, cfg);
    records.push_back(verify_thm12_equality(cfg.res.mesh_level, cfg));
    failures += report_records(records, ensure_out(opts) / "verify_thm12.csv");
  });

  // ---- verify-cor13 ------------------------------------------------------
  auto* cor13 = app.add_subcommand(
      "verify-cor13", "mu_1(Omega) <= mu_1(B^m) for Omega outside B^m");
  add_common(cor13, opts, true, true);
  cor13->callback([&] {
    const Config cfg = make_config(opts);
    const int trials = opts.trials > 0 ? opts.trials : 15;
    const auto records =
        verify_cor13(trials, opts.seed, cfg.res.mesh_level, cfg);
    failures += report_records(records, ensure_out(opts) / "verify_cor13.csv");
  });

  // ---- verify-harmonic ---------------------------------------------------
  auto* harm = app.add_subcommand(
      "verify-harmonic", "1/mu_2 + 1/mu_3 >= 2/mu_1(B^{mass/2}) on S^3");
  add_common(harm, opts, false, true);
  harm->callback([&] {
    const Config cfg = make_config(opts);
    const int trials = opts.trials > 0 ? opts.trials : 10;
    const auto records = verify_harmonic(trials, opts.seed, cfg);
    failures += report_records(records, ensure_out(opts) / "verify_harmonic.csv");
  });

  // ---- reproduce-counterexample ------------------------------------------
  auto* cex = app.add_subcommand(
      "reproduce-counterexample",
      "full-support density of mass 6 beating the cap of the same mass");
  std::string cex_rho;
  cex->add_option("--rho-file", cex_rho, "density JSON; default table density");
  add_common(cex, opts, false);
  cex->callback([&] {
    const Config cfg = make_config(opts);
    const RadialDensity rho =
        cex_rho.empty() ? rho_pl() : RadialDensity::load(cex_rho);
    const fs::path dir = ensure_out(opts);
    const CounterexampleReport rep =
        reproduce_counterexample(cfg, rho, (dir / "rho_profile.svg").string());
    std::printf("mass          = %.9g   (target 6 +- 1e-3)  %s\n", rep.mass,
                rep.mass_ok ? "[PASS]" : "[FAIL]");
    std::printf("mu_1(density) = %.9g   (target 2.213185 +- 2e-3)  %s\n",
                rep.mu1_density, rep.value_ok ? "[PASS]" : "[FAIL]");
    std::printf("mu_1(ball)    = %.9g\n", rep.mu1_ball);
    std::printf("strict gap    = %.9g   %s\n", rep.mu1_density - rep.mu1_ball,
                rep.strict ? "[PASS]" : "[FAIL]");
    if (!rep.pass()) {
      std::fprintf(stderr,
                   "counterexample reproduction failed: density %.9g vs ball "
                   "%.9g\n",
                   rep.mu1_density, rep.mu1_ball);
      ++failures;
    }
  });

  // ---- explore-q2 --------------------------------------------------------
  auto* q2 = app.add_subcommand(
      "explore-q2", "tabulate mu_1(B^m) across (0, 4pi); observational only");
  int q2_steps = 24;
  q2->add_option("--steps", q2_steps, "grid points across the area range");
  add_common(q2, opts, true);
  q2->callback([&] {
    Config cfg = make_config(opts);
    if (opts.level == 0) cfg.res.mesh_level = 4;  // a sweep, keep it light
    const auto rows = explore_q2(cfg.res.mesh_level, q2_steps, opts.seed, cfg);
    write_q2_csv(rows, (ensure_out(opts) / "explore_q2.csv").string());
    double max_up = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].area > 2.0 * M_PI)
        max_up = std::max(max_up, rows[i].mu1_fem - rows[i - 1].mu1_fem);
    for (const auto& r : rows)
      std::printf("area=%8.4f  r=%6.4f  mu1=%.6f\n", r.area, r.radius, r.mu1_fem);
    std::printf("largest upward step beyond the hemisphere: %.4g%s\n", max_up,
                max_up > 0 ? "  (non-monotone, as expected near 4pi)" : "");
  });

  CLI11_PARSE(app, argc, argv);
  return failures == 0 ? 0 : 1;
}
