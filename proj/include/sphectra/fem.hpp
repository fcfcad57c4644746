#pragma once

// Neumann eigensolver on S^2: P1 elements on flat icosphere triangles with
// one-point (centroid) density sampling. Domains are unions/complements of
// geodesic caps discretized by triangle-centroid membership; densities are
// per-vertex fields with a positive floor. The generalized problem
// K u = mu M u is solved by block shift-invert subspace iteration on a
// sparse Cholesky factor of K + s M.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <json.hpp>

#include "sphectra/icosphere.hpp"
#include "sphectra/radial_density.hpp"
#include "sphectra/rng.hpp"
#include "sphectra/sphere_core.hpp"

namespace sphectra {

/// Union of geodesic caps, or the complement of one.
struct DomainSpec {
  std::vector<Cap2> caps;
  bool complement = false;

  bool contains(const UnitVec2& v) const {
    bool in = false;
    for (const auto& c : caps)
      if (c.contains(v)) {
        in = true;
        break;
      }
    return complement ? !in : in;
  }

  static DomainSpec full_sphere() {
    DomainSpec s;
    s.complement = true;  // complement of the empty union
    return s;
  }

  static DomainSpec single_cap(const UnitVec2& center, double radius) {
    DomainSpec s;
    s.caps.emplace_back(center, radius);
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json caps_json = nlohmann::json::array();
    for (const auto& c : caps)
      caps_json.push_back({{"center", {c.center[0], c.center[1], c.center[2]}},
                           {"radius", c.radius}});
    return nlohmann::json{{"union", caps_json}, {"complement", complement}};
  }

  static DomainSpec from_json(const nlohmann::json& j) {
    DomainSpec s;
    for (const auto& cj : j.at("union")) {
      const auto c = cj.at("center").get<std::array<double, 3>>();
      s.caps.emplace_back(UnitVec2(Vec3{c[0], c[1], c[2]}),
                          cj.at("radius").get<double>());
    }
    if (j.contains("complement")) s.complement = j.at("complement").get<bool>();
    return s;
  }

  static DomainSpec load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open domain file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

/// Triangle/vertex selection of a domain on a given mesh.
struct DomainMask {
  std::vector<char> triangle_in;
  std::vector<int> dof_of_vertex;  // -1 when the vertex touches no triangle
  std::vector<int> vertex_of_dof;
  double area = 0.0;               // flat area of the included triangles
  int components = 0;
};

inline DomainMask domain_mask(const SphMesh& mesh, const DomainSpec& spec) {
  DomainMask mask;
  mask.triangle_in.assign(mesh.triangle_count(), 0);
  mask.dof_of_vertex.assign(mesh.vertex_count(), -1);

  std::vector<int> parent(mesh.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (!spec.contains(mesh.centroid(t))) continue;
    mask.triangle_in[t] = 1;
    mask.area += mesh.flat_area(t);
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) mask.dof_of_vertex[tri[k]] = 0;
    parent[find(tri[1])] = find(tri[0]);
    parent[find(tri[2])] = find(tri[0]);
  }

  int dofs = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (mask.dof_of_vertex[v] == 0) {
      mask.dof_of_vertex[v] = dofs++;
      mask.vertex_of_dof.push_back(v);
    }
  if (dofs == 0) throw std::domain_error("domain_mask: empty domain on this mesh");

  std::vector<char> seen(mesh.vertex_count(), 0);
  for (int v : mask.vertex_of_dof) {
    const int root = find(v);
    if (!seen[root]) {
      seen[root] = 1;
      ++mask.components;
    }
  }
  return mask;
}

/// Per-vertex density samples in [floor, 1].
struct DensityField {
  enum class Provenance { indicator, radial_sample, explicit_values };
  std::vector<double> values;
  double floor = 0.0;
  Provenance provenance = Provenance::explicit_values;
};

inline DensityField radial_field(const SphMesh& mesh, const RadialDensity& rho,
                                 const UnitVec2& pole = UnitVec2::axis(2)) {
  DensityField f;
  f.provenance = DensityField::Provenance::radial_sample;
  f.floor = rho.floor;
  f.values.resize(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v)
    f.values[v] = rho(geodesic_distance(pole, mesh.vertices[v]));
  return f;
}

struct FemSystem {
  Eigen::SparseMatrix<double> K, M;
  std::vector<int> dof_of_vertex;
  std::vector<int> vertex_of_dof;
  double mass = 0.0;  // sum of all M entries
  int mesh_level = 0;
};

namespace detail {

inline void local_matrices(const SphMesh& mesh, int t, double rho_c,
                           std::array<std::array<double, 3>, 3>& kloc,
                           std::array<std::array<double, 3>, 3>& mloc) {
  const auto& tri = mesh.triangles[t];
  const Vec3& p0 = mesh.vertices[tri[0]].coords();
  const Vec3& p1 = mesh.vertices[tri[1]].coords();
  const Vec3& p2 = mesh.vertices[tri[2]].coords();
  const Vec3 cr = cross(sub<2>(p1, p0), sub<2>(p2, p0));
  const double area2 = norm<2>(cr);  // 2A
  const Vec3 nhat = scale<2>(cr, 1.0 / area2);
  const std::array<Vec3, 3> edge = {sub<2>(p2, p1), sub<2>(p0, p2),
                                    sub<2>(p1, p0)};
  std::array<Vec3, 3> grad;
  for (int i = 0; i < 3; ++i) grad[i] = scale<2>(cross(nhat, edge[i]), 1.0 / area2);
  const double area = 0.5 * area2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      kloc[i][j] = rho_c * area * dot<2>(grad[i], grad[j]);
      mloc[i][j] = rho_c * area / 12.0 * (i == j ? 2.0 : 1.0);
    }
}

inline FemSystem assemble_impl(const SphMesh& mesh,
                               const std::vector<char>* tri_filter,
                               const DensityField* field,
                               const std::vector<int>& dof_of_vertex,
                               const std::vector<int>& vertex_of_dof) {
  FemSystem sys;
  sys.dof_of_vertex = dof_of_vertex;
  sys.vertex_of_dof = vertex_of_dof;
  sys.mesh_level = mesh.level;
  const int dofs = static_cast<int>(vertex_of_dof.size());

  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 9);
  tm.reserve(tk.capacity());
  std::array<std::array<double, 3>, 3> kloc, mloc;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (tri_filter && !(*tri_filter)[t]) continue;
    const auto& tri = mesh.triangles[t];
    double rho_c = 1.0;
    if (field)
      rho_c = (field->values[tri[0]] + field->values[tri[1]] +
               field->values[tri[2]]) /
              3.0;
    local_matrices(mesh, t, rho_c, kloc, mloc);
    for (int i = 0; i < 3; ++i) {
      const int di = dof_of_vertex[tri[i]];
      for (int j = 0; j < 3; ++j) {
        const int dj = dof_of_vertex[tri[j]];
        tk.emplace_back(di, dj, kloc[i][j]);
        tm.emplace_back(di, dj, mloc[i][j]);
      }
    }
  }
  sys.K.resize(dofs, dofs);
  sys.M.resize(dofs, dofs);
  sys.K.setFromTriplets(tk.begin(), tk.end());
  sys.M.setFromTriplets(tm.begin(), tm.end());
  sys.mass = sys.M.sum();

  // every retained dof must carry mass
  for (int d = 0; d < dofs; ++d)
    if (!(sys.M.coeff(d, d) > 0.0))
      throw std::domain_error("assemble: vertex with zero mass support");
  return sys;
}

}  // namespace detail

inline FemSystem assemble(const SphMesh& mesh, const DomainMask& mask) {
  return detail::assemble_impl(mesh, &mask.triangle_in, nullptr,
                               mask.dof_of_vertex, mask.vertex_of_dof);
}

inline FemSystem assemble(const SphMesh& mesh, const DensityField& field) {
  if (!(field.floor > 0.0))
    throw std::domain_error(
        "assemble: density fields need a positive floor; use a DomainMask for "
        "indicators");
  if (static_cast<int>(field.values.size()) != mesh.vertex_count())
    throw std::invalid_argument("assemble: field size does not match mesh");
  std::vector<int> dof(mesh.vertex_count());
  std::iota(dof.begin(), dof.end(), 0);
  return detail::assemble_impl(mesh, nullptr, &field, dof, dof);
}

/// Lowest eigenpairs of K u = mu M u. Eigenvectors are reported on the full
/// vertex set (zeros outside the domain) and are M-orthonormal.
struct SpectralResult {
  std::vector<double> eigenvalues;            // mu_0 <= ... <= mu_k
  std::vector<std::vector<double>> eigenvectors;  // vertex-indexed
  std::vector<double> residuals;              // |K x - mu M x| / |M x|
  int mesh_level = 0;
  double mass = 0.0;
};

inline SpectralResult solve_gevp(const FemSystem& sys, int k,
                                 std::uint64_t seed = 20240901ULL,
                                 double tol = 1e-8, int max_iter = 300) {
  const int dofs = static_cast<int>(sys.vertex_of_dof.size());
  if (k < 1) throw std::invalid_argument("solve_gevp: k must be >= 1");
  const int want = k + 1;
  const int block = std::min(dofs, want + 5);
  if (dofs < want)
    throw std::invalid_argument("solve_gevp: mesh too coarse for requested k");

  const double shift = 0.1;
  Eigen::SparseMatrix<double> shifted = sys.K + shift * sys.M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(shifted);
  if (solver.info() != Eigen::Success)
    throw SolveError("solve_gevp: factorization of K + sM failed");

  Rng rng(seed);
  Eigen::MatrixXd X(dofs, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < dofs; ++i) X(i, j) = rng.uniform(-1.0, 1.0);

  Eigen::VectorXd values(block);
  double worst = 1e30;
  for (int it = 0; it < max_iter; ++it) {
    X = solver.solve(sys.M * X);
    // M-orthonormalize the block, then Ritz-rotate
    Eigen::MatrixXd mr = X.transpose() * (sys.M * X);
    Eigen::LLT<Eigen::MatrixXd> llt(mr);
    if (llt.info() != Eigen::Success) {
      mr += 1e-14 * Eigen::MatrixXd::Identity(block, block);
      llt.compute(mr);
      if (llt.info() != Eigen::Success)
        throw SolveError("solve_gevp: degenerate iteration block");
    }
    X = llt.matrixU().solve<Eigen::OnTheRight>(X);
    Eigen::MatrixXd ar = X.transpose() * (sys.K * X);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(0.5 * (ar + ar.transpose()));
    X = X * ritz.eigenvectors();
    values = ritz.eigenvalues();

    worst = 0.0;
    for (int j = 0; j < want; ++j) {
      const Eigen::VectorXd kx = sys.K * X.col(j);
      const Eigen::VectorXd mx = sys.M * X.col(j);
      worst = std::max(worst, (kx - values(j) * mx).norm() / mx.norm());
    }
    if (worst <= tol) break;
  }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "solve_gevp: not converged, worst relative residual " << worst;
    throw SolveError(msg.str());
  }

  SpectralResult res;
  res.mesh_level = sys.mesh_level;
  res.mass = sys.mass;
  res.eigenvalues.assign(values.data(), values.data() + want);
  res.residuals.resize(want);
  res.eigenvectors.assign(want, std::vector<double>(sys.dof_of_vertex.size(), 0.0));
  for (int j = 0; j < want; ++j) {
    const Eigen::VectorXd kx = sys.K * X.col(j);
    const Eigen::VectorXd mx = sys.M * X.col(j);
    res.residuals[j] = (kx - values(j) * mx).norm() / mx.norm();
    for (int d = 0; d < dofs; ++d)
      res.eigenvectors[j][sys.vertex_of_dof[d]] = X(d, j);
  }
  return res;
}

/// Mask/assemble/solve with a two-level convergence report.
struct ConvergenceReport {
  SpectralResult coarse, fine;
  std::vector<double> extrapolated;    // Richardson, order 2
  std::vector<double> error_estimate;  // |fine - coarse| / 3
  double area_fine = 0.0;
  int components = 0;
};

inline ConvergenceReport neumann_eigs(const DomainSpec& spec, int level, int k,
                                      std::uint64_t seed = 20240901ULL,
                                      double tol = 1e-8) {
  if (level < 1 || level > 8)
    throw std::domain_error("neumann_eigs: level must lie in [1, 8]");
  ConvergenceReport rep;
  for (int pass = 0; pass < 2; ++pass) {
    const int lvl = level - 1 + pass;
    const SphMesh mesh = build_icosphere(lvl);
    const DomainMask mask = domain_mask(mesh, spec);
    const FemSystem sys = assemble(mesh, mask);
    SpectralResult r = solve_gevp(sys, k, seed, tol);
    if (pass == 0)
      rep.coarse = std::move(r);
    else {
      rep.fine = std::move(r);
      rep.area_fine = mask.area;
      rep.components = mask.components;
    }
  }
  rep.extrapolated.resize(rep.fine.eigenvalues.size());
  rep.error_estimate.resize(rep.fine.eigenvalues.size());
  for (std::size_t i = 0; i < rep.fine.eigenvalues.size(); ++i) {
    const double f = rep.fine.eigenvalues[i], c = rep.coarse.eigenvalues[i];
    rep.extrapolated[i] = (4.0 * f - c) / 3.0;
    rep.error_estimate[i] = std::abs(f - c) / 3.0;
  }
  return rep;
}

inline ConvergenceReport neumann_eigs(const RadialDensity& rho, int level, int k,
                                      std::uint64_t seed = 20240901ULL,
                                      double tol = 1e-8) {
  if (level < 1 || level > 8)
    throw std::domain_error("neumann_eigs: level must lie in [1, 8]");
  ConvergenceReport rep;
  for (int pass = 0; pass < 2; ++pass) {
    const int lvl = level - 1 + pass;
    const SphMesh mesh = build_icosphere(lvl);
    const DensityField field = radial_field(mesh, rho);
    const FemSystem sys = assemble(mesh, field);
    SpectralResult r = solve_gevp(sys, k, seed, tol);
    (pass == 0 ? rep.coarse : rep.fine) = std::move(r);
  }
  rep.extrapolated.resize(rep.fine.eigenvalues.size());
  rep.error_estimate.resize(rep.fine.eigenvalues.size());
  for (std::size_t i = 0; i < rep.fine.eigenvalues.size(); ++i) {
    const double f = rep.fine.eigenvalues[i], c = rep.coarse.eigenvalues[i];
    rep.extrapolated[i] = (4.0 * f - c) / 3.0;
    rep.error_estimate[i] = std::abs(f - c) / 3.0;
  }
  return rep;
}

inline void write_spectrum_csv(const SpectralResult& res,
                               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "index,mu,residual,mesh_level\n";
  out.precision(17);
  for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
    out << i << ',' << res.eigenvalues[i] << ',' << res.residuals[i] << ','
        << res.mesh_level << '\n';
}

}  // namespace sphectra
