#pragma once

// Folded potentials and their critical pairs on S^2.
//
//   E_rho(z)      = int rho(v) G(z.v) dv
//   EE_rho(a, z)  = int rho(v) G(z.F_a v) dv
//   V(z, w)       = ( grad_z EE_rho(a,z), R_a grad_z EE_sigma(a,z) ),
//                   a = (w-z)/|w-z|,
//
// where V lives on M = (S^2)^2 minus a diagonal tube. A critical pair is a
// zero of V; existence for rho >= 0 follows from the mod-4 zero count, and
// the finder realizes it constructively: discrete continuation from the
// antipodal ball pair (whose zero is known) down to the target densities,
// Newton-correcting in transported tangent frames, with a multistart lattice
// as fallback. The census enumerates distinct zeros and their swap orbits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sphectra/icosphere.hpp"
#include "sphectra/profile.hpp"
#include "sphectra/quadrature.hpp"
#include "sphectra/radial_density.hpp"
#include "sphectra/radial_mode.hpp"
#include "sphectra/sphere_core.hpp"

namespace sphectra {

/// A density known by its values at the nodes of a fixed quadrature rule.
/// The rho slot of the pair field must be nonnegative with positive mass;
/// the sigma slot may be signed (u_1 weighted indicators).
struct MassDensity {
  enum class Provenance { cap_indicator, mesh_weighted, radial, sampler };

  std::shared_ptr<const QuadratureRule> rule;
  std::vector<double> values;
  double mass = 0.0;
  Provenance provenance = Provenance::sampler;

  static MassDensity from_sampler(std::shared_ptr<const QuadratureRule> rule,
                                  const std::function<double(const UnitVec2&)>& f,
                                  Provenance prov = Provenance::sampler) {
    MassDensity d;
    d.rule = std::move(rule);
    d.provenance = prov;
    d.values.resize(d.rule->size());
    for (std::size_t i = 0; i < d.rule->size(); ++i) {
      d.values[i] = f(d.rule->nodes[i]);
      d.mass += d.rule->weights[i] * d.values[i];
    }
    return d;
  }

  static MassDensity cap_indicator(std::shared_ptr<const QuadratureRule> rule,
                                   const Cap2& cap) {
    return from_sampler(
        std::move(rule),
        [&cap](const UnitVec2& v) { return cap.contains(v) ? 1.0 : 0.0; },
        Provenance::cap_indicator);
  }

  static MassDensity zero(std::shared_ptr<const QuadratureRule> rule) {
    MassDensity d;
    d.rule = std::move(rule);
    d.values.assign(d.rule->size(), 0.0);
    return d;
  }

  /// Pointwise sum (two-cap patterns and homotopy endpoints).
  MassDensity operator+(const MassDensity& other) const {
    MassDensity d = *this;
    for (std::size_t i = 0; i < values.size(); ++i) d.values[i] += other.values[i];
    d.mass += other.mass;
    return d;
  }

  void require_admissible_rho() const {
    for (double v : values)
      if (v < 0.0)
        throw std::invalid_argument("MassDensity: rho role requires values >= 0");
    if (!(mass > 0.0))
      throw std::invalid_argument("MassDensity: rho role requires positive mass");
  }

  bool trivially_zero() const {
    for (double v : values)
      if (v != 0.0) return false;
    return true;
  }
};

/// u * 1_Omega sampled at the rule nodes: u interpolated from mesh vertex
/// values, the membership decided by the analytic domain spec.
template <class DomainLike>
MassDensity mesh_weighted_density(std::shared_ptr<const QuadratureRule> rule,
                                  const IcosphereHierarchy& hier,
                                  const std::vector<double>& vertex_values,
                                  const DomainLike& domain) {
  return MassDensity::from_sampler(
      std::move(rule),
      [&](const UnitVec2& v) {
        return domain.contains(v) ? hier.interpolate(vertex_values, v) : 0.0;
      },
      MassDensity::Provenance::mesh_weighted);
}

inline MassDensity radial_mass_density(std::shared_ptr<const QuadratureRule> rule,
                                       const RadialDensity& rho,
                                       const UnitVec2& pole = UnitVec2::axis(2)) {
  return MassDensity::from_sampler(
      std::move(rule),
      [&](const UnitVec2& v) { return rho(geodesic_distance(pole, v)); },
      MassDensity::Provenance::radial);
}

inline double potential(const MassDensity& rho, const UnitVec2& z,
                        const FoldWeight& W) {
  const QuadratureRule& rule = *rho.rule;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * rho.values[i] * W.G(dot(z, rule.nodes[i]));
  return s;
}

inline double folded_potential(const MassDensity& rho, const UnitVec2& a,
                               const UnitVec2& z, const FoldWeight& W,
                               double identity_tol = 1e-13) {
  const QuadratureRule& rule = *rho.rule;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const UnitVec2& v = rule.nodes[i];
    const UnitVec2 fv = dot(a, v) > identity_tol ? reflect(a, v) : v;
    s += rule.weights[i] * rho.values[i] * W.G(dot(z, fv));
  }
  return s;
}

inline Vec3 grad_potential(const MassDensity& rho, const UnitVec2& z,
                           const FoldWeight& W) {
  const QuadratureRule& rule = *rho.rule;
  Vec3 acc{0, 0, 0};
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const UnitVec2& v = rule.nodes[i];
    const double s = dot(z, v);
    const double c = rule.weights[i] * rho.values[i] * W.g(s);
    for (int k = 0; k < 3; ++k) acc[k] += c * (v[k] - s * z[k]);
  }
  return acc;
}

/// grad_z EE_rho(a, z): tangent at z by construction.
inline Vec3 grad_folded(const MassDensity& rho, const UnitVec2& a,
                        const UnitVec2& z, const FoldWeight& W,
                        double identity_tol = 1e-13) {
  const QuadratureRule& rule = *rho.rule;
  Vec3 acc{0, 0, 0};
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const UnitVec2& v = rule.nodes[i];
    const UnitVec2 fv = dot(a, v) > identity_tol ? reflect(a, v) : v;
    const double s = dot(z, fv);
    const double c = rule.weights[i] * rho.values[i] * W.g(s);
    for (int k = 0; k < 3; ++k) acc[k] += c * (fv[k] - s * z[k]);
  }
  return acc;
}

struct PairFieldValue {
  Vec3 at_z, at_w;       // tangent vectors at z and w
  double norm_rho = 0.0;   // |grad_z EE_rho|
  double norm_sigma = 0.0; // |grad_z EE_sigma| = |at_w|
};

namespace detail {

// One node sweep for both densities; they share g(z . F_a v) and the
// projection, which dominates the Newton costs.
inline PairFieldValue field_impl(const QuadratureRule& rule,
                                 const std::vector<double>& rho,
                                 const std::vector<double>& sigma,
                                 const UnitVec2& a, const UnitVec2& z,
                                 const FoldWeight& W, double identity_tol) {
  Vec3 acc_r{0, 0, 0}, acc_s{0, 0, 0};
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const UnitVec2& v = rule.nodes[i];
    const double ta = dot(a, v);
    Vec3 u = v.coords();
    if (ta > identity_tol)
      for (int k = 0; k < 3; ++k) u[k] -= 2.0 * ta * a[k];
    const double s = u[0] * z[0] + u[1] * z[1] + u[2] * z[2];
    const double g = W.g(s);
    const double wr = rule.weights[i] * rho[i] * g;
    const double ws = rule.weights[i] * sigma[i] * g;
    for (int k = 0; k < 3; ++k) {
      const double p = u[k] - s * z[k];
      acc_r[k] += wr * p;
      acc_s[k] += ws * p;
    }
  }
  PairFieldValue out;
  out.at_z = acc_r;
  out.norm_rho = norm<2>(acc_r);
  out.norm_sigma = norm<2>(acc_s);
  const double sa = dot<2>(acc_s, a.coords());
  for (int k = 0; k < 3; ++k) out.at_w[k] = acc_s[k] - 2.0 * sa * a[k];
  return out;
}

}  // namespace detail

/// The paired tangent field V_{rho,sigma}(z, w). Throws inside the diagonal
/// margin where a(z, w) degenerates.
inline PairFieldValue pair_field(const MassDensity& rho, const MassDensity& sigma,
                                 const UnitVec2& z, const UnitVec2& w,
                                 const FoldWeight& W, double diagonal_margin = 0.05,
                                 double identity_tol = 1e-13) {
  if (rho.rule != sigma.rule)
    throw std::invalid_argument("pair_field: densities must share one rule");
  const Vec3 diff = sub<2>(w.coords(), z.coords());
  if (norm<2>(diff) < diagonal_margin)
    throw std::domain_error("pair_field: (z, w) inside the diagonal margin");
  const UnitVec2 a(diff);
  return detail::field_impl(*rho.rule, rho.values, sigma.values, a, z, W,
                            identity_tol);
}

/// A solved critical pair: z is a critical point of both EE_rho(a, .) and
/// EE_sigma(a, .), w = R_a z, with the achieved gradient norms.
struct FoldCritPair {
  UnitVec2 a, z, w;
  double residual_rho = 0.0;
  double residual_sigma = 0.0;

  nlohmann::json to_json() const {
    auto arr = [](const UnitVec2& v) {
      return nlohmann::json{v[0], v[1], v[2]};
    };
    return nlohmann::json{{"a", arr(a)},
                          {"z", arr(z)},
                          {"w", arr(w)},
                          {"residual_rho", residual_rho},
                          {"residual_sigma", residual_sigma}};
  }
};

struct FoldSolveConfig {
  double diagonal_margin = 0.05;
  double residual_gate = 1e-8;    // accept when norm_rho + norm_sigma below
  double newton_target = 1e-12;   // what Newton actually aims for
  int continuation_steps = 32;
  int newton_max_iter = 40;
  double dedup_distance = 1e-4;
  double condition_limit = 1e6;
  double identity_tol = 1e-13;
};

namespace detail {

struct PairState {
  UnitVec2 z, w;
  Vec3 e1z, e2z, e1w, e2w;
};

inline PairState make_state(const UnitVec2& z, const UnitVec2& w) {
  PairState st{z, w, {}, {}, {}, {}};
  const TangentFrame fz = tangent_frame(z);
  const TangentFrame fw = tangent_frame(w);
  st.e1z = fz.e1;
  st.e2z = fz.e2;
  st.e1w = fw.e1;
  st.e2w = fw.e2;
  return st;
}

inline void transport_frame(const UnitVec2& p, Vec3& e1, Vec3& e2) {
  e1 = tangent_project(p, e1);
  const double n1 = norm<2>(e1);
  if (n1 < 1e-8) {
    const TangentFrame f = tangent_frame(p);
    e1 = f.e1;
    e2 = f.e2;
    return;
  }
  e1 = scale<2>(e1, 1.0 / n1);
  e2 = tangent_project(p, e2);
  e2 = axpy<2>(e2, -dot<2>(e2, e1), e1);
  const double n2 = norm<2>(e2);
  if (n2 < 1e-8) {
    e2 = cross(p.coords(), e1);
    return;
  }
  e2 = scale<2>(e2, 1.0 / n2);
}

inline PairState retract(const PairState& st, const Eigen::Vector4d& step) {
  PairState out = st;
  Vec3 zr = st.z.coords();
  zr = axpy<2>(zr, step(0), st.e1z);
  zr = axpy<2>(zr, step(1), st.e2z);
  out.z = UnitVec2(zr);
  Vec3 wr = st.w.coords();
  wr = axpy<2>(wr, step(2), st.e1w);
  wr = axpy<2>(wr, step(3), st.e2w);
  out.w = UnitVec2(wr);
  transport_frame(out.z, out.e1z, out.e2z);
  transport_frame(out.w, out.e1w, out.e2w);
  return out;
}

struct NewtonOutcome {
  PairState state;
  PairFieldValue field;
  bool converged = false;
  double condition = 0.0;  // of the last Jacobian, when computed
};

inline Eigen::Vector4d components(const PairState& st, const PairFieldValue& f) {
  return Eigen::Vector4d(dot<2>(f.at_z, st.e1z), dot<2>(f.at_z, st.e2z),
                         dot<2>(f.at_w, st.e1w), dot<2>(f.at_w, st.e2w));
}

// Damped Newton on the 4 (or 2, when sigma is vacuous) residual components.
inline NewtonOutcome newton_correct(const QuadratureRule& rule,
                                    const std::vector<double>& rho,
                                    const std::vector<double>& sigma,
                                    const FoldWeight& W, PairState state,
                                    const FoldSolveConfig& cfg,
                                    bool sigma_active) {
  NewtonOutcome out;
  const int dim = sigma_active ? 4 : 2;
  const double fd_h = 1e-6;

  auto eval = [&](const PairState& st) -> std::optional<PairFieldValue> {
    const Vec3 diff = sub<2>(st.w.coords(), st.z.coords());
    if (norm<2>(diff) < cfg.diagonal_margin) return std::nullopt;
    const UnitVec2 a(diff);
    return field_impl(rule, rho, sigma, a, st.z, W, cfg.identity_tol);
  };

  auto active_norm = [&](const PairFieldValue& f) {
    return sigma_active ? std::hypot(f.norm_rho, f.norm_sigma) : f.norm_rho;
  };

  out.field.norm_rho = std::numeric_limits<double>::infinity();
  out.field.norm_sigma = 0.0;
  auto fv = eval(state);
  if (!fv) return out;
  double fn = active_norm(*fv);

  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    if (fn <= cfg.newton_target) break;
    const Eigen::Vector4d F = components(state, *fv);
    Eigen::Matrix4d J = Eigen::Matrix4d::Identity();
    for (int k = 0; k < dim; ++k) {
      Eigen::Vector4d dstep = Eigen::Vector4d::Zero();
      dstep(k) = fd_h;
      const PairState probe = retract(state, dstep);
      const auto pf = eval(probe);
      if (!pf) return out;
      // compare in the original frames: probe moved only O(h), frame drift
      // contributes O(h^2)
      const Eigen::Vector4d Fp = components(state, *pf);
      J.col(k) = (Fp - F) / fd_h;
    }
    Eigen::Vector4d rhs = -F;
    if (!sigma_active) {
      rhs(2) = rhs(3) = 0.0;
      J.col(2) = J.col(3) = Eigen::Vector4d::Zero();
      J(2, 2) = J(3, 3) = 1.0;
    }
    const Eigen::FullPivLU<Eigen::Matrix4d> lu(J);
    if (!lu.isInvertible()) break;
    Eigen::Vector4d step = lu.solve(rhs);
    if (!step.allFinite()) break;

    bool improved = false;
    for (int damp = 0; damp < 7; ++damp) {
      const PairState trial = retract(state, step);
      const auto tf = eval(trial);
      if (tf) {
        const double tn = active_norm(*tf);
        if (tn < fn) {
          state = trial;
          fv = tf;
          fn = tn;
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
  }

  out.state = state;
  out.field = *fv;
  out.converged = fn <= cfg.newton_target * 10.0 ||
                  (fv->norm_rho + (sigma_active ? fv->norm_sigma : 0.0)) <=
                      cfg.residual_gate;
  return out;
}

// Condition number of the forward-difference Jacobian at a state.
inline double jacobian_condition(const QuadratureRule& rule,
                                 const std::vector<double>& rho,
                                 const std::vector<double>& sigma,
                                 const FoldWeight& W, const PairState& state,
                                 const FoldSolveConfig& cfg) {
  const double fd_h = 1e-6;
  auto eval = [&](const PairState& st) {
    const UnitVec2 a(sub<2>(st.w.coords(), st.z.coords()));
    return field_impl(rule, rho, sigma, a, st.z, W, cfg.identity_tol);
  };
  const PairFieldValue f0 = eval(state);
  const Eigen::Vector4d F0 = components(state, f0);
  Eigen::Matrix4d J;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d dstep = Eigen::Vector4d::Zero();
    dstep(k) = fd_h;
    const PairState probe = retract(state, dstep);
    J.col(k) = (components(state, eval(probe)) - F0) / fd_h;
  }
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(J);
  const double smin = svd.singularValues()(3);
  const double smax = svd.singularValues()(0);
  return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

inline std::vector<UnitVec2> fibonacci_lattice(int count) {
  std::vector<UnitVec2> pts;
  pts.reserve(count);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double zc = 1.0 - 2.0 * (i + 0.5) / count;
    const double rr = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const double phi = golden * i;
    pts.push_back(UnitVec2(Vec3{rr * std::cos(phi), rr * std::sin(phi), zc}));
  }
  return pts;
}

}  // namespace detail

/// Finds a critical pair for (rho, sigma): continuation from the antipodal
/// ball pair in t, then a final Newton polish. Falls back to a multistart
/// lattice when the path stalls. Throws SolveError with the best residual
/// when every strategy fails (the theorem guarantees a zero; failure means
/// the quadrature or conditioning is inadequate).
inline FoldCritPair find_fold_pair(const MassDensity& rho, const MassDensity& sigma,
                                   const FoldWeight& W, std::uint64_t seed = 1,
                                   const FoldSolveConfig& cfg = {}) {
  if (rho.rule != sigma.rule)
    throw std::invalid_argument("find_fold_pair: densities must share one rule");
  rho.require_admissible_rho();
  const QuadratureRule& rule = *rho.rule;
  const bool sigma_active = !sigma.trivially_zero();
  (void)seed;  // deterministic path; the lattice fallback is seed-free too

  const UnitVec2 p = UnitVec2::axis(2);
  const MassDensity capP = MassDensity::cap_indicator(rho.rule, Cap2(p, 0.5));
  const MassDensity capQ = MassDensity::cap_indicator(rho.rule, Cap2(-p, 0.5));

  std::vector<double> rho_t(rule.size()), sigma_t(rule.size());
  auto blend = [&](double t) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      rho_t[i] = (1.0 - t) * rho.values[i] + t * capP.values[i];
      sigma_t[i] = (1.0 - t) * sigma.values[i] + t * capQ.values[i];
    }
  };

  detail::PairState state = detail::make_state(p, -p);
  double t = 1.0;
  double dt = 1.0 / cfg.continuation_steps;
  blend(t);
  auto first = detail::newton_correct(rule, rho_t, sigma_t, W, state, cfg, true);
  bool path_ok = first.converged;
  if (path_ok) state = first.state;

  while (path_ok && t > 0.0) {
    const double t_next = std::max(0.0, t - dt);
    blend(t_next);
    const auto step = detail::newton_correct(rule, rho_t, sigma_t, W, state, cfg,
                                             sigma_active || t_next > 0.0);
    if (step.converged) {
      state = step.state;
      t = t_next;
      dt = std::min(dt * 2.0, 1.0 / cfg.continuation_steps);
    } else {
      dt *= 0.5;
      if (dt < 1e-4) {
        path_ok = false;
        break;
      }
    }
  }

  double best_residual = std::numeric_limits<double>::infinity();
  auto finish = [&](const detail::PairState& st) -> std::optional<FoldCritPair> {
    blend(0.0);
    const auto polished =
        detail::newton_correct(rule, rho_t, sigma_t, W, st, cfg, sigma_active);
    const double res = polished.field.norm_rho +
                       (sigma_active ? polished.field.norm_sigma : 0.0);
    best_residual = std::min(best_residual, res);
    if (!polished.converged || res > cfg.residual_gate) return std::nullopt;
    FoldCritPair pair{
        UnitVec2(sub<2>(polished.state.w.coords(), polished.state.z.coords())),
        polished.state.z, polished.state.w, polished.field.norm_rho,
        sigma_active ? polished.field.norm_sigma : 0.0};
    return pair;
  };

  if (path_ok) {
    if (auto pair = finish(state)) return *pair;
  }

  // multistart fallback over a deterministic lattice of pairs
  const auto lattice = detail::fibonacci_lattice(24);
  for (const auto& z0 : lattice) {
    for (const auto& w0 : lattice) {
      if (norm<2>(sub<2>(w0.coords(), z0.coords())) < cfg.diagonal_margin + 0.2)
        continue;
      if (auto pair = finish(detail::make_state(z0, w0))) return *pair;
    }
  }
  std::ostringstream msg;
  msg << "find_fold_pair: no critical pair below gate " << cfg.residual_gate
      << "; best residual " << best_residual;
  throw SolveError(msg.str());
}

/// Census of distinct zeros of V_{rho,sigma} from a deterministic multistart
/// lattice. Zeros are deduplicated by product geodesic distance and paired
/// into swap orbits (z,w) <-> (w,z); nondegeneracy is judged by the Jacobian
/// condition number. A vacuous sigma makes zeros non-isolated: flagged, not
/// counted.
struct CensusResult {
  std::vector<FoldCritPair> zeros;
  std::vector<int> orbit_id;       // same id for (z,w) and (w,z)
  std::vector<double> conditions;  // Jacobian condition per zero
  bool degenerate = false;
  int count() const { return static_cast<int>(zeros.size()); }

  nlohmann::json to_json() const {
    nlohmann::json zs = nlohmann::json::array();
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      nlohmann::json z = zeros[i].to_json();
      z["orbit"] = orbit_id[i];
      z["jacobian_condition"] = conditions[i];
      zs.push_back(z);
    }
    return nlohmann::json{
        {"zeros", zs}, {"count", count()}, {"degenerate", degenerate}};
  }
};

inline CensusResult zero_census(const MassDensity& rho, const MassDensity& sigma,
                                const FoldWeight& W, int lattice_points = 32,
                                std::uint64_t seed = 1,
                                const FoldSolveConfig& cfg = {}) {
  if (rho.rule != sigma.rule)
    throw std::invalid_argument("zero_census: densities must share one rule");
  const QuadratureRule& rule = *rho.rule;
  (void)seed;  // the lattice is deterministic
  CensusResult out;
  if (sigma.trivially_zero()) {
    out.degenerate = true;  // continuum of zeros, nothing to count
    return out;
  }

  std::vector<detail::PairState> found;
  auto near = [&](const detail::PairState& a, const detail::PairState& b) {
    const double dz = geodesic_distance(a.z, b.z);
    const double dw = geodesic_distance(a.w, b.w);
    return std::hypot(dz, dw) <= cfg.dedup_distance;
  };
  auto try_accept = [&](const detail::PairState& start) {
    const auto res = detail::newton_correct(rule, rho.values, sigma.values, W,
                                            start, cfg, true);
    if (!res.converged) return;
    if (res.field.norm_rho + res.field.norm_sigma > cfg.residual_gate) return;
    for (const auto& prev : found)
      if (near(res.state, prev)) return;
    found.push_back(res.state);
  };

  const auto lattice = detail::fibonacci_lattice(lattice_points);
  for (const auto& z0 : lattice)
    for (const auto& w0 : lattice) {
      if (norm<2>(sub<2>(w0.coords(), z0.coords())) < cfg.diagonal_margin + 0.1)
        continue;
      try_accept(detail::make_state(z0, w0));
    }

  // swap images are zeros by the S_* V = Q V symmetry; make sure each orbit
  // is complete before counting
  const std::size_t primary = found.size();
  for (std::size_t i = 0; i < primary; ++i)
    try_accept(detail::make_state(found[i].w, found[i].z));

  out.orbit_id.assign(found.size(), -1);
  int next_orbit = 0;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (out.orbit_id[i] >= 0) continue;
    out.orbit_id[i] = next_orbit;
    const detail::PairState mirror = detail::make_state(found[i].w, found[i].z);
    for (std::size_t j = i + 1; j < found.size(); ++j)
      if (out.orbit_id[j] < 0 && near(found[j], mirror)) out.orbit_id[j] = next_orbit;
    ++next_orbit;
  }

  for (const auto& st : found) {
    const double cond = detail::jacobian_condition(rule, rho.values, sigma.values,
                                                   W, st, cfg);
    out.conditions.push_back(cond);
    if (!(cond <= cfg.condition_limit)) out.degenerate = true;
    const UnitVec2 a(sub<2>(st.w.coords(), st.z.coords()));
    const auto f = detail::field_impl(rule, rho.values, sigma.values, a, st.z, W,
                                      cfg.identity_tol);
    out.zeros.push_back(FoldCritPair{a, st.z, st.w, f.norm_rho, f.norm_sigma});
  }
  if (out.count() % 2 != 0) out.degenerate = true;  // incomplete orbit pairing
  return out;
}

}  // namespace sphectra
