#include "dirac_thermo/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dirac_thermo/constraints.hpp"

namespace dirac_thermo {

// ---------------------------------------------------------------------------
// Cross-formulation agreement

double CompareReport::worst() const {
  double w = 0.0;
  for (const auto& r : rows) {
    if (r.available) w = std::max(w, r.max_deviation);
  }
  return w;
}

namespace {

void require_complete(const Trajectory& t, const std::string& name) {
  if (!t.complete) throw IntegrationFailure(name + " integration failed: " + t.failure);
}

FormulationDeviation named_row(const std::string& a, const std::string& b) {
  FormulationDeviation row;
  row.first = a;
  row.second = b;
  return row;
}

FormulationDeviation deviation(const std::string& a, const std::vector<Vec>& xa, const std::string& b,
                               const std::vector<Vec>& xb) {
  FormulationDeviation row = named_row(a, b);
  const std::size_t m = std::min(xa.size(), xb.size());
  if (xa.size() != xb.size()) {
    row.available = false;
    row.note = "trajectories have different lengths";
    return row;
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double d = inf_norm(xa[k] - xb[k]);
    row.max_deviation = std::max(row.max_deviation, d);
    if (k + 1 == m) row.final_deviation = d;
  }
  return row;
}

}  // namespace

CompareReport cross_formulation_compare(const SimpleThermoModel& model, const Vec& q0, double S0, const Vec& v0,
                                        double t_end, double h, const CompareOptions& opts) {
  CompareReport rep;
  const Trajectory lag = integrate_explicit(lagrangian_system(model), lagrangian_initial_state(model, q0, S0, v0),
                                            t_end, h);
  require_complete(lag, "lagrangian");
  const std::vector<Vec> xm = states_on_M(lag, model);

  const auto hmodel = try_hamiltonian(model);
  if (!hmodel) {
    FormulationDeviation only = named_row("lagrangian-M", "-");
    only.note = "Lagrangian side only";
    rep.rows.push_back(only);
    for (const char* name : {"hamilton-dirac-N", "lagrange-dirac-TstarQ"}) {
      FormulationDeviation row = named_row(name, "lagrangian-M");
      row.available = false;
      row.note = "unavailable: degenerate Lagrangian";
      rep.rows.push_back(row);
    }
    return rep;
  }

  const Vec p0 = partial_legendre(model, q0, v0, S0);
  Vec yN(2 * model.n() + 1);
  yN << q0, S0, p0;
  const Trajectory hd = integrate_explicit(hamilton_dirac_system(*hmodel), yN, t_end, h);
  require_complete(hd, "hamilton-dirac");
  Vec yT(2 * model.n() + 2);
  yT << q0, S0, p0, 0.0;
  const Trajectory ld = integrate_explicit(lagrange_dirac_system(*hmodel), yT, t_end, h);
  require_complete(ld, "lagrange-dirac");

  const std::vector<Vec> xn = states_on_M(hd, model);
  const std::vector<Vec> xt = states_on_M(ld, model);
  rep.rows.push_back(deviation("hamilton-dirac-N", xn, "lagrangian-M", xm));
  rep.rows.push_back(deviation("lagrange-dirac-TstarQ", xt, "lagrangian-M", xm));
  rep.rows.push_back(deviation("hamilton-dirac-N", xn, "lagrange-dirac-TstarQ", xt));

  if (opts.include_implicit) {
    const Trajectory ip = integrate_implicit_P(model, consistent_point_P(model, q0, S0, v0), t_end, h);
    require_complete(ip, "implicit-P");
    FormulationDeviation row = deviation("implicit-P", states_on_M(ip, model), "lagrangian-M", xm);
    row.note = "first-order scheme";
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Action variations

VariationField random_variation(Index n, double t0, double t1, std::mt19937_64& rng, double amplitude, int modes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat c(n, modes);
  for (Index i = 0; i < n; ++i) {
    for (int k = 0; k < modes; ++k) c(i, k) = u(rng);
    const double l1 = c.row(i).cwiseAbs().sum();
    if (l1 > 1.0) c.row(i) /= l1;
  }
  const double span = t1 - t0;
  constexpr double pi = std::numbers::pi;
  VariationField f;
  f.dq = [=](double t) {
    const double s = (t - t0) / span;
    const double b = std::sin(pi * s) * std::sin(pi * s);
    Vec out(n);
    for (Index i = 0; i < n; ++i) {
      double m = 1.0;
      for (int k = 0; k < modes; ++k) m += 0.5 * c(i, k) * std::sin((k + 1) * pi * s);
      out[i] = amplitude * b * m;
    }
    return out;
  };
  f.dq_dot = [=](double t) {
    const double s = (t - t0) / span;
    const double b = std::sin(pi * s) * std::sin(pi * s);
    const double db = pi * std::sin(2.0 * pi * s);
    Vec out(n);
    for (Index i = 0; i < n; ++i) {
      double m = 1.0, dm = 0.0;
      for (int k = 0; k < modes; ++k) {
        m += 0.5 * c(i, k) * std::sin((k + 1) * pi * s);
        dm += 0.5 * c(i, k) * (k + 1) * pi * std::cos((k + 1) * pi * s);
      }
      out[i] = amplitude * (db * m + b * dm) / span;
    }
    return out;
  };
  f.dS = [](double) { return 0.0; };
  return f;
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double dt = t[k + 1] - t[k];
    w[k] += 0.5 * dt;
    w[k + 1] += 0.5 * dt;
  }
  return w;
}

double admissible_dS(double a, const Vec& f, const Vec& dq) {
  if (!std::isfinite(a) || a == 0.0) throw DegeneratePoint("cannot project a variation where dL/dS = 0");
  return f.dot(dq) / a;
}

}  // namespace

double action_variation_residual(const SimpleThermoModel& model, const Trajectory& trajectory,
                                 const VariationField& field, const ActionVariationOptions& opts) {
  if (!(opts.epsilon > 0.0)) throw InvalidParameters("variation amplitude must be positive");
  const Index n = model.n();
  const std::vector<Vec> xm = states_on_M(trajectory, model);
  const std::vector<double> w = trapezoid_weights(trajectory.times);
  const double eps = opts.epsilon;
  double acc = 0.0;
  for (std::size_t k = 0; k < xm.size(); ++k) {
    const PointM m = PointM::from_coords(n, xm[k]);
    const double t = trajectory.times[k];
    const Vec dq = field.dq(t);
    const Vec dqd = field.dq_dot(t);
    require_size(dq.size(), n, "variation dq");
    double dS = field.dS ? field.dS(t) : 0.0;
    if (opts.project) {
      dS = admissible_dS(lagrangian_partials<double>(model, m.q, m.v, m.S).LS, model.friction<double>(m.q, m.v, m.S),
                         dq);
    }
    const double L0 = model.lagrangian<double>(m.q, m.v, m.S);
    const Vec q1 = m.q + eps * dq, v1 = m.v + eps * dqd;
    const double L1 = model.lagrangian<double>(q1, v1, m.S + eps * dS);
    const double work = model.external<double>(m.q, m.v, m.S).dot(dq);
    acc += w[k] * ((L1 - L0) / eps + work);
  }
  return std::abs(acc);
}

double action_variation_residual_hamilton(const HamiltonianModel& h, const Trajectory& trajectory,
                                          const VariationField& field, const ActionVariationOptions& opts) {
  if (!(opts.epsilon > 0.0)) throw InvalidParameters("variation amplitude must be positive");
  if (trajectory.arena != Arena::N) throw InvalidParameters("Hamilton-side action needs an N-arena trajectory");
  const SimpleThermoModel& model = h.source();
  const Index n = model.n();
  const std::vector<double> w = trapezoid_weights(trajectory.times);
  const double eps = opts.epsilon;
  double acc = 0.0;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const PointN x = PointN::from_coords(n, trajectory.states[k]);
    const Vec qdot = trajectory.rates[k].head(n);
    const double t = trajectory.times[k];
    const Vec dq = field.dq(t);
    const Vec dqd = field.dq_dot(t);
    const Vec dp = field.dp ? field.dp(t) : Vec::Zero(n);
    double dS = field.dS ? field.dS(t) : 0.0;
    const ConstraintCoefficients c = constraint_coefficients(model, ArenaPoint(x));
    if (opts.project) dS = admissible_dS(c.a, c.f, dq);
    const double A0 = x.p.dot(qdot) - h.hamiltonian(x);
    const PointN x1{x.q + eps * dq, x.S + eps * dS, x.p + eps * dp};
    const double A1 = x1.p.dot(qdot + eps * dqd) - h.hamiltonian(x1);
    const Vec v = h.velocity(x.q, x.p, x.S);
    const double work = model.external<double>(x.q, v, x.S).dot(dq);
    acc += w[k] * ((A1 - A0) / eps + work);
  }
  return std::abs(acc);
}

// ---------------------------------------------------------------------------
// Mechanics reduction

MechanicsReductionReport mechanics_reduction_check(const SimpleThermoModel& model, int samples, std::uint64_t seed) {
  MechanicsReductionReport rep;
  const Index n = model.n();
  std::mt19937_64 rng(seed);
  const ScalarField Lf = model.lagrangian_field();
  for (int k = 0; k < samples; ++k) {
    const SamplePoint s = sample(model.box(), rng);
    if (inf_norm(model.friction<double>(s.q, s.v, s.S)) != 0.0) {
      rep.reason = "friction is not identically zero";
      return rep;
    }
    Vec z(2 * n + 1);
    z << s.q, s.v, s.S;
    const Mat H = hessian(Lf, z);
    const double coupling = H.col(2 * n).head(2 * n).cwiseAbs().maxCoeff();
    if (coupling > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff())) {
      rep.reason = "the mechanical part of L depends on S";
      return rep;
    }
  }
  std::optional<HamiltonianModel> h;
  try {
    h.emplace(model);
  } catch (const DegenerateLagrangian& e) {
    rep.reason = e.what();
    return rep;
  }
  rep.preconditions_met = true;
  const ScalarField Hf = h->hamiltonian_field();
  for (int k = 0; k < samples; ++k) {
    const SamplePoint s = sample(model.box(), rng);
    const PointN x{s.q, s.S, partial_legendre(model, s.q, s.v, s.S)};
    const HamiltonRates r = vector_field_N(*h, x);
    const Vec g = grad(Hf, x.coords());
    const double dev = std::max(inf_norm(r.qdot - g.segment(n + 1, n)), inf_norm(r.pdot + g.head(n)));
    rep.max_field_deviation = std::max(rep.max_field_deviation, dev);
    rep.max_entropy_rate = std::max(rep.max_entropy_rate, std::abs(r.Sdot));
    ++rep.samples;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Theorem battery

namespace {

// Perturbs the rate components the Dirac conditions constrain.
Vec perturb_rates(Arena arena, Index n, const Vec& tangent, std::mt19937_64& rng) {
  const Layout l = layout(arena, n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec d = Vec::Zero(tangent.size());
  for (Index i = 0; i < n; ++i) {
    d[l.q + i] = u(rng);
    d[l.p + i] = u(rng);
  }
  d[l.S] = u(rng);
  if (l.Lambda >= 0) d[l.Lambda] = u(rng);
  return tangent + 0.5 * d / inf_norm(d);
}

struct BatteryCase {
  std::string name;
  Arena arena;
  // Residual of the formulation at one node, given the tangent to use.
  std::function<double(std::size_t k, const Vec& tangent)> residual;
  std::function<Vec(std::size_t k)> tangent;
};

}  // namespace

std::vector<TheoremCheck> theorem_battery(const SimpleThermoModel& model, const Trajectory& trajectory,
                                          std::mt19937_64& rng, int samples) {
  if (trajectory.arena != Arena::M) throw InvalidParameters("theorem battery expects a Lagrangian (M) trajectory");
  if (trajectory.size() < 3) throw InvalidParameters("theorem battery needs at least three nodes");
  const Index n = model.n();
  const auto hmodel = try_hamiltonian(model);

  auto point_M = [&](std::size_t k) { return PointM::from_coords(n, trajectory.states[k]); };
  auto rate_M = [&](std::size_t k) -> const Vec& { return trajectory.rates[k]; };
  auto Sdot = [&](std::size_t k) { return trajectory.rates[k][n]; };
  // W is free in the conditions; use the observed rate of change of Sdot.
  auto W_dot = [&](std::size_t k) {
    return (Sdot(k + 1) - Sdot(k - 1)) / (trajectory.times[k + 1] - trajectory.times[k - 1]);
  };
  auto base_match = [&](const PointM& m) {
    return inf_norm(m.p - partial_legendre(model, m.q, m.v, m.S));
  };

  std::vector<BatteryCase> cases;
  cases.push_back({"pontryagin-P", Arena::P,
                   [&](std::size_t k, const Vec& t) {
                     const PointM m = point_M(k);
                     const PointP x = lift_M_to_P(m, Sdot(k));
                     const ConstraintCoefficients c = constraint_coefficients(model, ArenaPoint(x));
                     return inf_norm(dirac_membership(Arena::P, c, t, energy_differential_P(model, x)));
                   },
                   [&](std::size_t k) {
                     const Vec& r = rate_M(k);
                     Vec t(3 * n + 3);
                     t << r.head(n), r[n], r.segment(n + 1, n), W_dot(k), r.segment(2 * n + 1, n), 0.0;
                     return t;
                   }});
  cases.push_back({"lagrange-dirac-TstarQ", Arena::TstarQ,
                   [&](std::size_t k, const Vec& t) {
                     const PointM m = point_M(k);
                     const ArenaPoint z(PointTstarQ{m.q, m.S, m.p, 0.0});
                     const ConstraintCoefficients c = constraint_coefficients(model, z);
                     const Vec res = dirac_membership(Arena::TstarQ, c, t,
                                                      dirac_differential_TstarQ(model, m.q, m.S, m.v, Sdot(k)));
                     return std::max(inf_norm(res), base_match(m));
                   },
                   [&](std::size_t k) {
                     const Vec& r = rate_M(k);
                     Vec t(2 * n + 2);
                     t << r.head(n), r[n], r.segment(2 * n + 1, n), 0.0;
                     return t;
                   }});
  cases.push_back({"mixed-M", Arena::M,
                   [&](std::size_t k, const Vec& t) {
                     const PointM m = point_M(k);
                     const ConstraintCoefficients c = constraint_coefficients(model, ArenaPoint(m));
                     return inf_norm(dirac_membership(Arena::M, c, t, energy_differential_M(model, m)));
                   },
                   [&](std::size_t k) { return rate_M(k); }});
  auto tangent_N = [&](std::size_t k) {
    const Vec& r = rate_M(k);
    Vec t(2 * n + 1);
    t << r.head(n), r[n], r.segment(2 * n + 1, n);
    return t;
  };
  cases.push_back({"lagrange-dirac-N", Arena::N,
                   [&](std::size_t k, const Vec& t) {
                     const PointM m = point_M(k);
                     const ConstraintCoefficients c = constraint_coefficients(model, ArenaPoint(PointN{m.q, m.S, m.p}));
                     const Vec res = dirac_membership(Arena::N, c, t, dirac_differential_N(model, m.q, m.S, m.v));
                     return std::max(inf_norm(res), base_match(m));
                   },
                   tangent_N});
  cases.push_back({"hamilton-dirac-N", Arena::N,
                   [&](std::size_t k, const Vec& t) {
                     const PointM m = point_M(k);
                     const PointN x{m.q, m.S, m.p};
                     const ConstraintCoefficients c = constraint_coefficients(model, ArenaPoint(x));
                     return inf_norm(dirac_membership(Arena::N, c, t, hamiltonian_differential_N(*hmodel, x)));
                   },
                   tangent_N});

  const std::size_t first = 1, last = trajectory.size() - 2;
  const int count = std::max(1, std::min<int>(samples, static_cast<int>(last - first + 1)));
  std::vector<TheoremCheck> out;
  for (const BatteryCase& bc : cases) {
    TheoremCheck chk;
    chk.name = bc.name;
    chk.arena = bc.arena;
    const bool needs_legendre = bc.arena == Arena::TstarQ || bc.arena == Arena::N;
    if (needs_legendre && !hmodel) {
      chk.available = false;
      chk.note = "skipped: degenerate Lagrangian";
      out.push_back(chk);
      continue;
    }
    chk.min_perturbed_residual = std::numeric_limits<double>::infinity();
    for (int j = 0; j < count; ++j) {
      const std::size_t k =
          count == 1 ? first : first + static_cast<std::size_t>(j) * (last - first) / static_cast<std::size_t>(count - 1);
      const Vec t = bc.tangent(k);
      chk.max_solution_residual = std::max(chk.max_solution_residual, bc.residual(k, t));
      chk.min_perturbed_residual =
          std::min(chk.min_perturbed_residual, bc.residual(k, perturb_rates(bc.arena, n, t, rng)));
      ++chk.samples;
    }
    out.push_back(chk);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampled suites

std::vector<IsotropySummary> isotropy_suite(const SimpleThermoModel& model, std::mt19937_64& rng, int points) {
  const Index n = model.n();
  const bool regular = !model.velocity_independent();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<IsotropySummary> out;
  for (Arena a : {Arena::P, Arena::TstarQ, Arena::M, Arena::N}) {
    IsotropySummary s;
    s.arena = a;
    s.expected_dimension = arena_dimension(a, n);
    if ((a == Arena::TstarQ || a == Arena::N) && !regular) {
      s.available = false;
      s.note = "skipped: degenerate Lagrangian";
      out.push_back(s);
      continue;
    }
    for (int k = 0; k < points; ++k) {
      const SamplePoint sp = sample(model.box(), rng);
      const Vec p = partial_legendre(model, sp.q, sp.v, sp.S);
      Vec x;
      switch (a) {
        case Arena::P: x = PointP{sp.q, sp.S, sp.v, u(rng), p + 0.1 * Vec::NullaryExpr(n, [&] { return u(rng); }), u(rng)}.coords(); break;
        case Arena::TstarQ: x = PointTstarQ{sp.q, sp.S, p, u(rng)}.coords(); break;
        case Arena::M: x = PointM{sp.q, sp.S, sp.v, p + 0.1 * Vec::NullaryExpr(n, [&] { return u(rng); })}.coords(); break;
        case Arena::N: x = PointN{sp.q, sp.S, p}.coords(); break;
      }
      const DiracBasis b = dirac_basis(a, model, ArenaPoint(a, n, x));
      s.dimension_ok = s.dimension_ok && b.dimension == s.expected_dimension;
      s.rank_ok = s.rank_ok && b.rank == s.expected_dimension;
      s.max_isotropy_defect = std::max(s.max_isotropy_defect, b.isotropy_defect);
      ++s.points;
    }
    out.push_back(s);
  }
  return out;
}

LegendreSummary legendre_suite(const SimpleThermoModel& model, std::mt19937_64& rng, int samples) {
  LegendreSummary s;
  const auto h = try_hamiltonian(model);
  if (!h) {
    s.available = false;
    s.note = "skipped: degenerate Lagrangian";
    return s;
  }
  for (int k = 0; k < samples; ++k) {
    const SamplePoint sp = sample(model.box(), rng);
    const Vec p = partial_legendre(model, sp.q, sp.v, sp.S);
    const Vec v = inverse_partial_legendre(model, sp.q, p, sp.S);
    s.max_round_trip = std::max(s.max_round_trip, inf_norm(v - sp.v) / std::max(1.0, inf_norm(sp.v)));

    const PointN x{sp.q, sp.S, p};
    const double H = h->hamiltonian(x);
    const double E = generalized_energy(model, embed_jL(*h, x));
    s.max_energy_identity = std::max(s.max_energy_identity, std::abs(E - H) / std::max(1.0, std::abs(H)));

    const double T = h->temperature_and_friction(x.q, x.p, x.S).T;
    const double HS = h->gradient(x.q, x.p, x.S).HS;
    s.max_temperature_identity = std::max(s.max_temperature_identity, std::abs(T - HS) / std::max(1.0, std::abs(T)));
    ++s.samples;
  }
  return s;
}

double max_fd_deviation(const ScalarField& field, const PointSampler& sampler, std::mt19937_64& rng, int points,
                        double h) {
  double worst = 0.0;
  for (int k = 0; k < points; ++k) worst = std::max(worst, fd_check(field, sampler(rng), h));
  return worst;
}

std::vector<FieldCheck> gradient_suite(const SimpleThermoModel& model, std::mt19937_64& rng, int points) {
  const Index n = model.n();
  std::vector<FieldCheck> out;
  const DomainBox box = model.box();
  const PointSampler lag_sampler = [box, n](std::mt19937_64& g) {
    const SamplePoint s = sample(box, g);
    Vec z(2 * n + 1);
    z << s.q, s.v, s.S;
    return z;
  };
  out.push_back({model.name() + ".L", max_fd_deviation(model.lagrangian_field(), lag_sampler, rng, points), points});
  if (const auto h = try_hamiltonian(model)) {
    const PointSampler ham_sampler = [box, n, &model](std::mt19937_64& g) {
      const SamplePoint s = sample(box, g);
      Vec z(2 * n + 1);
      z << s.q, s.S, partial_legendre(model, s.q, s.v, s.S);
      return z;
    };
    out.push_back({model.name() + ".H", max_fd_deviation(h->hamiltonian_field(), ham_sampler, rng, points), points});
  }
  return out;
}

}  // namespace dirac_thermo
