#include "dirac_thermo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "dirac_thermo/constraints.hpp"

namespace dirac_thermo {

namespace {

double entropy_rate_from_constraint(double LS, const Vec& F, const Vec& v) {
  if (LS == 0.0) throw DegeneratePoint("dL/dS = 0: entropy rate undefined");
  return F.dot(v) / LS;
}

Vec solve_or_throw(const Mat& A, const Vec& b, const char* what) {
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) throw SingularSystem(std::string(what) + " is singular");
  return lu.solve(b);
}

// d/dt (dL/dv) along a motion with rates (qdot, vdot, Sdot).
Vec momentum_rate(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S, const Vec& qdot,
                  const Vec& vdot, double Sdot) {
  const VelocityHessian H = velocity_hessian(model, q, v, S);
  return H.vv * vdot + H.vq * qdot + H.vS * Sdot;
}

// Jacobian of G(q, r, S) = F^fr + F^ext + dL/dq with respect to (q, r, S).
Mat algebraic_jacobian(const SimpleThermoModel& model, const Vec& q, const Vec& r, double S) {
  const Index n = model.n();
  Vec z(2 * n + 1);
  z << q, r, S;
  return jacobian_of<double>(
      [&](const Vector<Dual1>& zd) -> Vector<Dual1> {
        const Vector<Dual1> qd = zd.head(n), rd = zd.segment(n, n);
        const Dual1 Sd = zd[2 * n];
        return model.friction<Dual1>(qd, rd, Sd) + model.external<Dual1>(qd, rd, Sd) +
               lagrangian_partials<Dual1>(model, qd, rd, Sd).Lq;
      },
      z);
}

double scale_of(const Vec& x) { return std::max(1.0, inf_norm(x)); }

}  // namespace

Vec algebraic_rate(const SimpleThermoModel& model, const Vec& q, double S, const Vec& seed, double tol,
                   int max_iter) {
  const Index n = model.n();
  Vec r = seed.size() == n ? seed : Vec::Zero(n);
  for (int it = 0; it <= max_iter; ++it) {
    const Vec G = model.friction<double>(q, r, S) + model.external<double>(q, r, S) +
                  lagrangian_partials<double>(model, q, r, S).Lq;
    if (!G.allFinite()) throw NonConvergence(model.name() + ": non-finite force balance");
    const double scale = std::max(1.0, inf_norm(lagrangian_partials<double>(model, q, r, S).Lq));
    if (inf_norm(G) <= tol * scale && it > 0) return r;
    if (it == max_iter) break;
    const Mat J = algebraic_jacobian(model, q, r, S).middleCols(n, n);
    r -= solve_or_throw(J, G, "friction coefficient matrix");
  }
  throw NonConvergence(model.name() + ": algebraic rate solve did not converge");
}

LagrangianRates vector_field_lagrangian(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S) {
  const Index n = model.n();
  require_size(q.size(), n, "q");
  require_size(v.size(), n, "v");
  LagrangianRates out;
  if (model.velocity_independent()) {
    const Vec r = algebraic_rate(model, q, S, v);
    const double LS = lagrangian_partials<double>(model, q, r, S).LS;
    out.qdot = r;
    out.Sdot = entropy_rate_from_constraint(LS, model.friction<double>(q, r, S), r);
    // Differentiate G(q, r, S) = 0 along the motion to recover the rate of r.
    const Mat J = algebraic_jacobian(model, q, r, S);
    const Vec rhs = -(J.leftCols(n) * r + J.col(2 * n) * out.Sdot);
    out.vdot = solve_or_throw(J.middleCols(n, n), rhs, "friction coefficient matrix");
    return out;
  }
  const LagrangianPartials<double> d = lagrangian_partials<double>(model, q, v, S);
  const Vec F = model.friction<double>(q, v, S);
  const Vec Fext = model.external<double>(q, v, S);
  out.qdot = v;
  out.Sdot = entropy_rate_from_constraint(d.LS, F, v);
  const VelocityHessian H = velocity_hessian(model, q, v, S);
  const Vec rhs = F + Fext + d.Lq - H.vq * v - H.vS * out.Sdot;
  out.vdot = solve_or_throw(H.vv, rhs, "velocity Hessian");
  return out;
}

HamiltonRates vector_field_N(const HamiltonianModel& h, const PointN& x) {
  const SimpleThermoModel& model = h.source();
  require_size(x.q.size(), model.n(), "q");
  require_size(x.p.size(), model.n(), "p");
  const HamiltonianGradient g = h.gradient(x.q, x.p, x.S);
  if (!(g.HS > 0.0)) {
    throw TemperatureViolation(model.name() + ": dH/dS = " + std::to_string(g.HS) + " is not a positive temperature");
  }
  const Vec v = h.velocity(x.q, x.p, x.S);
  const Vec F = model.friction<double>(x.q, v, x.S);
  const Vec Fext = model.external<double>(x.q, v, x.S);
  HamiltonRates out;
  out.qdot = g.Hp;
  out.pdot = -g.Hq + F + Fext;
  out.Sdot = -F.dot(out.qdot) / g.HS;
  return out;
}

Vec energy_differential_P(const SimpleThermoModel& model, const PointP& x) {
  const Index n = model.n();
  const LagrangianPartials<double> d = lagrangian_partials<double>(model, x.q, x.v, x.S);
  Vec c(3 * n + 3);
  c << -d.Lq - model.external<double>(x.q, x.v, x.S), -d.LS, x.p - d.Lv, x.Lambda, x.v, x.W;
  return c;
}

Vec energy_differential_M(const SimpleThermoModel& model, const PointM& x) {
  const Index n = model.n();
  const LagrangianPartials<double> d = lagrangian_partials<double>(model, x.q, x.v, x.S);
  Vec c(3 * n + 1);
  c << -d.Lq - model.external<double>(x.q, x.v, x.S), -d.LS, x.p - d.Lv, x.v;
  return c;
}

Vec dirac_differential_TstarQ(const SimpleThermoModel& model, const Vec& q, double S, const Vec& v, double W) {
  const Index n = model.n();
  const LagrangianPartials<double> d = lagrangian_partials<double>(model, q, v, S);
  Vec c(2 * n + 2);
  c << -d.Lq - model.external<double>(q, v, S), -d.LS, v, W;
  return c;
}

Vec dirac_differential_N(const SimpleThermoModel& model, const Vec& q, double S, const Vec& v) {
  const Index n = model.n();
  const LagrangianPartials<double> d = lagrangian_partials<double>(model, q, v, S);
  Vec c(2 * n + 1);
  c << -d.Lq - model.external<double>(q, v, S), -d.LS, v;
  return c;
}

Vec hamiltonian_differential_N(const HamiltonianModel& h, const PointN& x) {
  const Index n = h.n();
  const HamiltonianGradient g = h.gradient(x.q, x.p, x.S);
  const Vec v = h.velocity(x.q, x.p, x.S);
  Vec c(2 * n + 1);
  c << g.Hq - h.source().external<double>(x.q, v, x.S), g.HS, g.Hp;
  return c;
}

Vec implicit_residual_P(const SimpleThermoModel& model, const PointP& x, const Vec& rates) {
  return implicit_residual_P_generic<double>(model, x.coords(), rates);
}

PointP consistent_point_P(const SimpleThermoModel& model, const Vec& q, double S, const Vec& v) {
  const LagrangianPartials<double> d = lagrangian_partials<double>(model, q, v, S);
  const double W = entropy_rate_from_constraint(d.LS, model.friction<double>(q, v, S), v);
  return {q, S, v, W, d.Lv, 0.0};
}

// ---------------------------------------------------------------------------

namespace {

DiagnosticsRecord diagnose_M(const SimpleThermoModel& model, const Vec& x, const Vec& xdot) {
  const Index n = model.n();
  const PointM m = PointM::from_coords(n, x);
  const ArenaPoint base(Arena::M, n, x);
  DiagnosticsRecord r;
  r.energy = generalized_energy(model, m);
  r.entropy = m.S;
  r.entropy_rate = xdot[n];
  r.constraint_residual = std::abs(variational_constraint_residual(model, m.q, m.v, m.S, xdot.head(n), xdot[n]));
  const ConstraintCoefficients c = constraint_coefficients(model, base);
  r.dirac_residual = inf_norm(dirac_membership(Arena::M, c, xdot, energy_differential_M(model, m)));
  return r;
}

}  // namespace

ExplicitSystem lagrangian_system(const SimpleThermoModel& model) {
  const Index n = model.n();
  ExplicitSystem sys;
  sys.name = "lagrangian";
  sys.arena = Arena::M;
  sys.n = n;
  if (model.velocity_independent()) {
    sys.rhs = [model, n](const Vec& y) {
      const LagrangianRates r = vector_field_lagrangian(model, y.head(n), Vec::Zero(n), y[n]);
      Vec out(n + 1);
      out << r.qdot, r.Sdot;
      return out;
    };
    sys.to_arena = [model, n](const Vec& y) {
      const Vec q = y.head(n);
      const double S = y[n];
      const Vec r = algebraic_rate(model, q, S, Vec::Zero(n));
      Vec x(3 * n + 1);
      x << q, S, r, partial_legendre(model, q, r, S);
      return x;
    };
    sys.arena_tangent = [model, n](const Vec& y, const Vec&) {
      const Vec q = y.head(n);
      const double S = y[n];
      const LagrangianRates r = vector_field_lagrangian(model, q, Vec::Zero(n), S);
      Vec t(3 * n + 1);
      t << r.qdot, r.Sdot, r.vdot, momentum_rate(model, q, r.qdot, S, r.qdot, r.vdot, r.Sdot);
      return t;
    };
  } else {
    sys.rhs = [model, n](const Vec& y) {
      const LagrangianRates r = vector_field_lagrangian(model, y.head(n), y.segment(n + 1, n), y[n]);
      Vec out(2 * n + 1);
      out << r.qdot, r.Sdot, r.vdot;
      return out;
    };
    sys.to_arena = [model, n](const Vec& y) {
      const Vec q = y.head(n), v = y.segment(n + 1, n);
      Vec x(3 * n + 1);
      x << q, y[n], v, partial_legendre(model, q, v, y[n]);
      return x;
    };
    sys.arena_tangent = [model, n](const Vec& y, const Vec& ydot) {
      const Vec q = y.head(n), v = y.segment(n + 1, n);
      const Vec qdot = ydot.head(n), vdot = ydot.segment(n + 1, n);
      Vec t(3 * n + 1);
      t << qdot, ydot[n], vdot, momentum_rate(model, q, v, y[n], qdot, vdot, ydot[n]);
      return t;
    };
  }
  sys.diagnose = [model](const Vec& x, const Vec& xdot) { return diagnose_M(model, x, xdot); };
  return sys;
}

Vec lagrangian_initial_state(const SimpleThermoModel& model, const Vec& q, double S, const Vec& v) {
  const Index n = model.n();
  require_size(q.size(), n, "initial q");
  if (model.velocity_independent()) {
    Vec y(n + 1);
    y << q, S;
    return y;
  }
  require_size(v.size(), n, "initial v");
  Vec y(2 * n + 1);
  y << q, S, v;
  return y;
}

ExplicitSystem hamilton_dirac_system(const HamiltonianModel& h) {
  const Index n = h.n();
  ExplicitSystem sys;
  sys.name = "hamilton-dirac";
  sys.arena = Arena::N;
  sys.n = n;
  sys.rhs = [h, n](const Vec& y) {
    const HamiltonRates r = vector_field_N(h, PointN::from_coords(n, y));
    Vec out(2 * n + 1);
    out << r.qdot, r.Sdot, r.pdot;
    return out;
  };
  sys.to_arena = [](const Vec& y) { return y; };
  sys.arena_tangent = [](const Vec&, const Vec& ydot) { return ydot; };
  sys.diagnose = [h, n](const Vec& x, const Vec& xdot) {
    const PointN pt = PointN::from_coords(n, x);
    const ConstraintCoefficients c = constraint_coefficients(h.source(), ArenaPoint(Arena::N, n, x));
    DiagnosticsRecord r;
    r.energy = h.hamiltonian(pt);
    r.entropy = pt.S;
    r.entropy_rate = xdot[n];
    r.constraint_residual = std::abs(c.a * xdot[n] - c.f.dot(xdot.head(n)));
    r.dirac_residual = inf_norm(dirac_membership(Arena::N, c, xdot, hamiltonian_differential_N(h, pt)));
    return r;
  };
  return sys;
}

ExplicitSystem lagrange_dirac_system(const HamiltonianModel& h) {
  const Index n = h.n();
  ExplicitSystem sys;
  sys.name = "lagrange-dirac";
  sys.arena = Arena::TstarQ;
  sys.n = n;
  sys.rhs = [h, n](const Vec& y) {
    const SimpleThermoModel& model = h.source();
    const PointTstarQ z = PointTstarQ::from_coords(n, y);
    const Vec v = h.velocity(z.q, z.p, z.S);
    const LagrangianPartials<double> d = lagrangian_partials<double>(model, z.q, v, z.S);
    const Vec F = model.friction<double>(z.q, v, z.S);
    Vec out(2 * n + 2);
    out << v, entropy_rate_from_constraint(d.LS, F, v), d.Lq + F + model.external<double>(z.q, v, z.S), 0.0;
    return out;
  };
  sys.to_arena = [](const Vec& y) { return y; };
  sys.arena_tangent = [](const Vec&, const Vec& ydot) { return ydot; };
  sys.diagnose = [h, n](const Vec& x, const Vec& xdot) {
    const SimpleThermoModel& model = h.source();
    const PointTstarQ z = PointTstarQ::from_coords(n, x);
    const Vec v = h.velocity(z.q, z.p, z.S);
    const ConstraintCoefficients c = constraint_coefficients(model, ArenaPoint(Arena::TstarQ, n, x));
    const double W = entropy_rate_from_constraint(c.a, c.f, v);
    DiagnosticsRecord r;
    r.energy = z.p.dot(v) - model.lagrangian<double>(z.q, v, z.S);
    r.entropy = z.S;
    r.entropy_rate = xdot[n];
    r.constraint_residual = std::abs(c.a * xdot[n] - c.f.dot(xdot.head(n)));
    const Vec res = dirac_membership(Arena::TstarQ, c, xdot, dirac_differential_TstarQ(model, z.q, z.S, v, W));
    r.dirac_residual = std::max({inf_norm(res), std::abs(z.Lambda)});
    return r;
  };
  return sys;
}

Trajectory integrate_explicit(const ExplicitSystem& system, const Vec& y0, double t_end, double h) {
  if (!(h > 0.0)) throw InvalidParameters("step size must be positive");
  if (!(t_end > 0.0)) throw InvalidParameters("final time must be positive");
  Trajectory traj;
  traj.arena = system.arena;
  traj.n = system.n;
  const auto steps = static_cast<long long>(std::ceil(t_end / h - 1e-9));
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  auto record = [&](double t, const Vec& y, const Vec& ydot) {
    const Vec x = system.to_arena(y);
    const Vec xdot = system.arena_tangent(y, ydot);
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.rates.push_back(xdot);
    traj.diagnostics.push_back(system.diagnose(x, xdot));
  };
  auto fail = [&](const std::string& why, double t) {
    traj.complete = false;
    traj.failure = why + " at t = " + std::to_string(t);
  };

  Vec y = y0;
  Vec k1;
  try {
    k1 = system.rhs(y);
    record(0.0, y, k1);
  } catch (const Error& e) {
    fail(e.what(), 0.0);
    return traj;
  }
  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const double t_next = k + 1 == steps ? t_end : static_cast<double>(k + 1) * h;
    const double dt = t_next - t;
    try {
      const Vec k2 = system.rhs(y + 0.5 * dt * k1);
      const Vec k3 = system.rhs(y + 0.5 * dt * k2);
      const Vec k4 = system.rhs(y + dt * k3);
      Vec y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!y_next.allFinite()) {
        fail("non-finite state", t_next);
        return traj;
      }
      y = std::move(y_next);
      k1 = system.rhs(y);
      if (!k1.allFinite()) {
        fail("non-finite rate", t_next);
        return traj;
      }
      record(t_next, y, k1);
    } catch (const Error& e) {
      fail(e.what(), t_next);
      return traj;
    }
  }
  return traj;
}

namespace {

DiagnosticsRecord diagnose_P(const SimpleThermoModel& model, const Vec& x, const Vec& xdot) {
  const Index n = model.n();
  const PointP pt = PointP::from_coords(n, x);
  DiagnosticsRecord r;
  r.energy = generalized_energy(model, pt);
  r.entropy = pt.S;
  r.entropy_rate = xdot[n];
  r.constraint_residual = std::abs(variational_constraint_residual(model, pt.q, pt.v, pt.S, xdot.head(n), xdot[n]));
  const ConstraintCoefficients c = constraint_coefficients(model, ArenaPoint(Arena::P, n, x));
  r.dirac_residual = inf_norm(dirac_membership(Arena::P, c, xdot, energy_differential_P(model, pt)));
  return r;
}

// Tangent at a consistent P point from the explicit Lagrangian flow; the W
// rate is not constrained by the Dirac conditions and is left at zero.
Vec lagrangian_tangent_P(const SimpleThermoModel& model, const PointP& x) {
  const Index n = model.n();
  const LagrangianRates r = vector_field_lagrangian(model, x.q, x.v, x.S);
  Vec t(3 * n + 3);
  t << r.qdot, r.Sdot, r.vdot, 0.0, momentum_rate(model, x.q, x.v, x.S, r.qdot, r.vdot, r.Sdot), 0.0;
  return t;
}

}  // namespace

Trajectory integrate_implicit_P(const SimpleThermoModel& model, const PointP& x0, double t_end, double h,
                                const ImplicitOptions& opts) {
  if (!(h > 0.0)) throw InvalidParameters("step size must be positive");
  if (!(t_end > 0.0)) throw InvalidParameters("final time must be positive");
  const Index n = model.n();
  const Layout l = layout(Arena::P, n);
  Vec x = x0.coords();

  {
    const LagrangianPartials<double> d = lagrangian_partials<double>(model, x0.q, x0.v, x0.S);
    const Vec F = model.friction<double>(x0.q, x0.v, x0.S);
    const double tol = opts.consistency_tol;
    if (inf_norm(x0.p - d.Lv) > tol * scale_of(x0.p) || std::abs(x0.Lambda) > tol ||
        std::abs(d.LS * x0.W - F.dot(x0.v)) > tol * std::max(1.0, std::abs(d.LS * x0.W))) {
      throw InconsistentInitialCondition(
          "initial P point must satisfy p = dL/dv, Lambda = 0 and the phenomenological constraint");
    }
  }

  Trajectory traj;
  traj.arena = Arena::P;
  traj.n = n;
  const auto steps = static_cast<long long>(std::ceil(t_end / h - 1e-9));
  {
    const Vec xdot = lagrangian_tangent_P(model, x0);
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    traj.rates.push_back(xdot);
    traj.diagnostics.push_back(diagnose_P(model, x, xdot));
  }

  Vec prev_rate = traj.rates.back();
  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const double t_next = k + 1 == steps ? t_end : static_cast<double>(k + 1) * h;
    const double dt = t_next - t;
    const Vec x_old = x;
    const Vector<Dual1> x_old_d = lift<Dual1>(x_old);
    Vec z = x_old + dt * prev_rate;
    z[l.Lambda] = 0.0;

    bool converged = false;
    try {
      for (int it = 0; it < opts.max_iter; ++it) {
        const Vec r = implicit_residual_P_generic<double>(model, z, (z - x_old) / dt);
        if (!r.allFinite()) break;
        if (inf_norm(r) <= opts.newton_tol) {
          converged = true;
          break;
        }
        const Mat J = jacobian_of<double>(
            [&](const Vector<Dual1>& zd) -> Vector<Dual1> {
              const Vector<Dual1> rate = (zd - x_old_d) / Dual1(dt);
              return implicit_residual_P_generic<Dual1>(model, zd, rate);
            },
            z);
        Eigen::PartialPivLU<Mat> lu(J);
        const Vec dz = lu.solve(r);
        if (!dz.allFinite()) break;
        z -= dz;
        // The residual rows carry rates divided by dt, so their roundoff floor
        // can sit above newton_tol; a Newton step this small is converged.
        if (inf_norm(dz) <= opts.newton_tol * scale_of(z)) {
          converged = implicit_residual_P_generic<double>(model, z, (z - x_old) / dt).allFinite();
          break;
        }
      }
    } catch (const Error& e) {
      traj.complete = false;
      traj.failure = std::string(e.what()) + " at t = " + std::to_string(t_next);
      return traj;
    }
    if (!converged) {
      traj.complete = false;
      traj.failure = "Newton did not converge at t = " + std::to_string(t_next);
      return traj;
    }
    // Put the algebraic blocks back on their manifold exactly.
    z.segment(l.p, n) =
        partial_legendre(model, z.segment(l.q, n), z.segment(l.v, n), z[l.S]);
    z[l.Lambda] = 0.0;

    const Vec rate = (z - x_old) / dt;
    x = z;
    prev_rate = rate;
    traj.times.push_back(t_next);
    traj.states.push_back(x);
    traj.rates.push_back(rate);
    traj.diagnostics.push_back(diagnose_P(model, x, rate));
  }
  return traj;
}

DiagnosticsReport monitor(const Trajectory& trajectory) {
  DiagnosticsReport rep;
  if (trajectory.diagnostics.empty()) return rep;
  const double E0 = trajectory.diagnostics.front().energy;
  const double denom = std::max(1.0, std::abs(E0));
  rep.min_entropy_step = trajectory.diagnostics.size() > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t k = 0; k < trajectory.diagnostics.size(); ++k) {
    const DiagnosticsRecord& d = trajectory.diagnostics[k];
    rep.energy_drift = std::max(rep.energy_drift, std::abs(d.energy - E0) / denom);
    rep.max_constraint_residual = std::max(rep.max_constraint_residual, d.constraint_residual);
    rep.max_dirac_residual = std::max(rep.max_dirac_residual, d.dirac_residual);
    if (k > 0) {
      rep.min_entropy_step = std::min(rep.min_entropy_step, d.entropy - trajectory.diagnostics[k - 1].entropy);
    }
  }
  return rep;
}

std::vector<Vec> states_on_M(const Trajectory& trajectory, const SimpleThermoModel& model) {
  const Index n = trajectory.n;
  std::vector<Vec> out;
  out.reserve(trajectory.states.size());
  for (const Vec& x : trajectory.states) {
    switch (trajectory.arena) {
      case Arena::M:
        out.push_back(x);
        break;
      case Arena::P: {
        const PointP pt = PointP::from_coords(n, x);
        out.push_back(PointM{pt.q, pt.S, pt.v, pt.p}.coords());
        break;
      }
      case Arena::TstarQ: {
        const PointTstarQ z = PointTstarQ::from_coords(n, x);
        out.push_back(embed_jL(model, PointN{z.q, z.S, z.p}).coords());
        break;
      }
      case Arena::N:
        out.push_back(embed_jL(model, PointN::from_coords(n, x)).coords());
        break;
    }
  }
  return out;
}

}  // namespace dirac_thermo
