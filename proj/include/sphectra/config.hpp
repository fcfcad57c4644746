#pragma once

// Central numeric knobs. Every tolerance and resolution used by the solvers
// lives here so tests, the CLI and the verification harness agree on one set
// of values. The CLI can override single entries from a JSON file.

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace sphectra {

struct Tolerances {
  double unit_norm = 1e-12;        // |v|_2 - 1 allowed after any geometric op
  double quad_identity = 1e-13;    // nodes with |a.v| below this keep the identity branch
  double shoot_bracket = 1e-10;    // eigenvalue bracket width for radial shooting
  double ode_residual = 1e-8;      // max-norm residual of a solved radial mode
  double fold_residual = 1e-8;     // gate on |grad E_rho| + |grad E_sigma| at a critical pair
  double newton_target = 1e-12;    // Newton tries to push field norms this low
  double dedup_distance = 1e-4;    // product geodesic distance merging census zeros
  double diagonal_margin = 0.05;   // tubular neighbourhood of {z=w} excluded from search
  double orthogonality_rel = 1e-6; // test-function orthogonality, relative to mass*max|g|
  double condition_limit = 1e6;    // census nondegeneracy filter on Newton Jacobians
  double spectrum_zero = 1e-9;     // |mu_0| bound for the constant mode
  double gevp_residual = 1e-8;     // relative residual for reported FEM eigenpairs
};

struct Resolutions {
  int quad_theta = 256;       // product rule rings (cos-theta Gauss-Legendre)
  int quad_phi = 512;         // product rule azimuthal nodes
  int census_theta = 64;      // cheaper rule used by the zero census
  int census_phi = 128;
  int census_starts = 32;     // census starts = census_starts^2 lattice pairs
  int radial_grid = 2048;     // shooting output grid on [0, r]
  int density_intervals = 4096;
  int ell_max = 8;
  int mesh_level = 5;         // acceptance runs
  int mesh_level_props = 4;   // property suites
  int continuation_steps = 32;
  int newton_max_iter = 40;
};

struct Config {
  Tolerances tol;
  Resolutions res;
};

// Partial override: only keys present in the file are replaced.
inline void load_overrides(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tolerance file: " + path);
  nlohmann::json j;
  in >> j;
  auto set_d = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = j.at(key).get<double>();
  };
  auto set_i = [&](const char* key, int& slot) {
    if (j.contains(key)) slot = j.at(key).get<int>();
  };
  set_d("unit_norm", cfg.tol.unit_norm);
  set_d("quad_identity", cfg.tol.quad_identity);
  set_d("shoot_bracket", cfg.tol.shoot_bracket);
  set_d("ode_residual", cfg.tol.ode_residual);
  set_d("fold_residual", cfg.tol.fold_residual);
  set_d("newton_target", cfg.tol.newton_target);
  set_d("dedup_distance", cfg.tol.dedup_distance);
  set_d("diagonal_margin", cfg.tol.diagonal_margin);
  set_d("orthogonality_rel", cfg.tol.orthogonality_rel);
  set_d("condition_limit", cfg.tol.condition_limit);
  set_d("spectrum_zero", cfg.tol.spectrum_zero);
  set_d("gevp_residual", cfg.tol.gevp_residual);
  set_i("quad_theta", cfg.res.quad_theta);
  set_i("quad_phi", cfg.res.quad_phi);
  set_i("census_theta", cfg.res.census_theta);
  set_i("census_phi", cfg.res.census_phi);
  set_i("census_starts", cfg.res.census_starts);
  set_i("radial_grid", cfg.res.radial_grid);
  set_i("density_intervals", cfg.res.density_intervals);
  set_i("ell_max", cfg.res.ell_max);
  set_i("mesh_level", cfg.res.mesh_level);
  set_i("mesh_level_props", cfg.res.mesh_level_props);
  set_i("continuation_steps", cfg.res.continuation_steps);
  set_i("newton_max_iter", cfg.res.newton_max_iter);
}

}  // namespace sphectra
