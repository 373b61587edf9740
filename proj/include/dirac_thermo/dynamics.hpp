#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dirac_thermo/arena.hpp"
#include "dirac_thermo/dirac.hpp"
#include "dirac_thermo/legendre.hpp"

namespace dirac_thermo {

// ---------------------------------------------------------------------------
// Vector fields

struct LagrangianRates {
  Vec qdot;
  Vec vdot;
  double Sdot = 0.0;
};

/// Euler-Lagrange flow with the entropy equation. Regular Lagrangians solve the
/// mass matrix for vdot; velocity-independent ones (reaction networks) solve the
/// algebraic force balance for the rate, in which case the incoming v is only a
/// Newton seed and qdot is the solved rate.
LagrangianRates vector_field_lagrangian(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S);

/// Rate solving F^fr + F^ext + dL/dq = 0 for a velocity-independent Lagrangian.
Vec algebraic_rate(const SimpleThermoModel& model, const Vec& q, double S, const Vec& seed, double tol = 1e-13,
                   int max_iter = 50);

struct HamiltonRates {
  Vec qdot;
  Vec pdot;
  double Sdot = 0.0;
};

/// qdot = dH/dp, pdot = -dH/dq + friction (+ external), T Sdot = -<friction, qdot>.
HamiltonRates vector_field_N(const HamiltonianModel& h, const PointN& x);

// ---------------------------------------------------------------------------
// Covectors driving each Dirac formulation, external force already subtracted
// from the q-component.

Vec energy_differential_P(const SimpleThermoModel& model, const PointP& x);
Vec energy_differential_M(const SimpleThermoModel& model, const PointM& x);
/// Dirac differential of L lifted to (q, S, v, W); its base point is (q, S, dL/dv, 0).
Vec dirac_differential_TstarQ(const SimpleThermoModel& model, const Vec& q, double S, const Vec& v, double W);
/// Dirac differential of L on the reduced space; its base point is (q, S, dL/dv).
Vec dirac_differential_N(const SimpleThermoModel& model, const Vec& q, double S, const Vec& v);
Vec hamiltonian_differential_N(const HamiltonianModel& h, const PointN& x);

// ---------------------------------------------------------------------------
// Implicit system on the Pontryagin bundle

/// Six condition groups, flattened in the order
///   (pdot - dL/dq - Fext) dL/dS + (Lambdadot - dL/dS) F   [n]
///   dL/dS Sdot - <F, qdot>                                 [1]
///   p - dL/dv                                              [n]
///   Lambda                                                 [1]
///   v - qdot                                               [n]
///   W - Sdot                                               [1]
Vec implicit_residual_P(const SimpleThermoModel& model, const PointP& x, const Vec& rates);

template <class T>
Vector<T> implicit_residual_P_generic(const SimpleThermoModel& model, const Vector<T>& x, const Vector<T>& rates) {
  const Index n = model.n();
  const Layout l = layout(Arena::P, n);
  require_size(x.size(), l.dim, "P coordinates");
  require_size(rates.size(), l.dim, "P rates");
  const Vector<T> q = x.segment(l.q, n), v = x.segment(l.v, n), p = x.segment(l.p, n);
  const T S = x[l.S], W = x[l.W], Lambda = x[l.Lambda];
  const LagrangianPartials<T> d = lagrangian_partials<T>(model, q, v, S);
  const Vector<T> F = model.friction<T>(q, v, S);
  const Vector<T> Fext = model.external<T>(q, v, S);

  Vector<T> r(l.dim);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    r[k++] = (rates[l.p + i] - d.Lq[i] - Fext[i]) * d.LS + (rates[l.Lambda] - d.LS) * F[i];
  }
  T c = d.LS * rates[l.S];
  for (Index i = 0; i < n; ++i) c -= F[i] * rates[l.q + i];
  r[k++] = c;
  for (Index i = 0; i < n; ++i) r[k++] = p[i] - d.Lv[i];
  r[k++] = Lambda;
  for (Index i = 0; i < n; ++i) r[k++] = v[i] - rates[l.q + i];
  r[k++] = W - rates[l.S];
  return r;
}

/// Consistent P point from (q, S, v): p = dL/dv, Lambda = 0, W from the phenomenological constraint.
PointP consistent_point_P(const SimpleThermoModel& model, const Vec& q, double S, const Vec& v);

// ---------------------------------------------------------------------------
// Trajectories and integration

struct DiagnosticsRecord {
  double energy = 0.0;
  double entropy = 0.0;
  double entropy_rate = 0.0;
  double constraint_residual = 0.0;
  double dirac_residual = 0.0;
};

struct Trajectory {
  Arena arena = Arena::M;
  Index n = 0;
  std::vector<double> times;
  std::vector<Vec> states;  // arena coordinates
  std::vector<Vec> rates;   // arena tangent vectors
  std::vector<DiagnosticsRecord> diagnostics;
  bool complete = true;
  std::string failure;

  std::size_t size() const { return times.size(); }
};

// An explicit ODE y' = rhs(y) together with how to read its state as a point
// on an arena and how to diagnose it there. y need not be the full arena
// coordinates (the Lagrangian system integrates (q, S, v) only).
struct ExplicitSystem {
  std::string name;
  Arena arena = Arena::M;
  Index n = 0;
  std::function<Vec(const Vec&)> rhs;
  std::function<Vec(const Vec&)> to_arena;
  std::function<Vec(const Vec& y, const Vec& ydot)> arena_tangent;
  std::function<DiagnosticsRecord(const Vec& x, const Vec& xdot)> diagnose;
};

/// State y = (q, S, v), or (q, S) for velocity-independent Lagrangians; arena M.
ExplicitSystem lagrangian_system(const SimpleThermoModel& model);
Vec lagrangian_initial_state(const SimpleThermoModel& model, const Vec& q, double S, const Vec& v);

/// State y = (q, S, p); arena N; driven by the Hamiltonian.
ExplicitSystem hamilton_dirac_system(const HamiltonianModel& h);

/// State y = (q, S, p, Lambda); arena TstarQ; driven by the Dirac differential of L.
ExplicitSystem lagrange_dirac_system(const HamiltonianModel& h);

/// Fixed-step classical RK4. A non-finite state stops the run and returns the
/// steps taken so far with complete = false.
Trajectory integrate_explicit(const ExplicitSystem& system, const Vec& y0, double t_end, double h);

struct ImplicitOptions {
  double newton_tol = 1e-10;  // on the residual, or on the Newton step relative to max(1, |x|)
  int max_iter = 30;
  double consistency_tol = 1e-8;
};

/// Implicit Euler on the Pontryagin residual, Newton with a dual-number Jacobian.
Trajectory integrate_implicit_P(const SimpleThermoModel& model, const PointP& x0, double t_end, double h,
                                const ImplicitOptions& opts = {});

struct DiagnosticsReport {
  double energy_drift = 0.0;
  double min_entropy_step = 0.0;
  double max_constraint_residual = 0.0;
  double max_dirac_residual = 0.0;
};

DiagnosticsReport monitor(const Trajectory& trajectory);

/// Any trajectory's states as M coordinates (q, S, v, p).
std::vector<Vec> states_on_M(const Trajectory& trajectory, const SimpleThermoModel& model);

}  // namespace dirac_thermo
