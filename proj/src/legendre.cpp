#include "dirac_thermo/legendre.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include <Eigen/SVD>

namespace dirac_thermo {

Vec partial_legendre(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S) {
  return lagrangian_partials<double>(model, q, v, S).Lv;
}

double velocity_hessian_condition(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S) {
  const Mat vv = velocity_hessian(model, q, v, S).vv;
  const Vec sv = Eigen::JacobiSVD<Mat>(vv).singularValues();
  const double smin = sv[sv.size() - 1];
  return smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
}

Vec inverse_partial_legendre(const SimpleThermoModel& model, const Vec& q, const Vec& p, double S,
                             const LegendreOptions& opts, const Vec* warm_start) {
  const Index n = model.n();
  require_size(p.size(), n, "momentum p");
  if (model.velocity_independent()) {
    throw DegenerateLagrangian(model.name() + ": Lagrangian does not depend on velocities; no Legendre inverse");
  }
  Vec v = warm_start ? *warm_start : Vec::Zero(n);
  require_size(v.size(), n, "warm start");
  const double scale = std::max(1.0, inf_norm(p));
  for (int it = 0; it <= opts.max_iter; ++it) {
    const Vec r = partial_legendre(model, q, v, S) - p;
    if (!r.allFinite()) throw NonConvergence(model.name() + ": inverse Legendre produced non-finite residual");
    if (inf_norm(r) <= opts.tol * scale) return v;
    if (it == opts.max_iter) break;
    const Mat vv = velocity_hessian(model, q, v, S).vv;
    Eigen::JacobiSVD<Mat> svd(vv, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    if (!(sv[n - 1] > 0.0) || sv[0] / sv[n - 1] > opts.max_condition) {
      std::ostringstream msg;
      msg << model.name() << ": velocity Hessian singular (condition " << (sv[n - 1] > 0 ? sv[0] / sv[n - 1] : INFINITY)
          << ")";
      throw DegenerateLagrangian(msg.str());
    }
    v -= svd.solve(r);
  }
  throw NonConvergence(model.name() + ": inverse Legendre did not converge in " + std::to_string(opts.max_iter) +
                       " iterations");
}

HamiltonianModel::HamiltonianModel(SimpleThermoModel model, LegendreOptions opts, int samples, std::uint64_t seed)
    : model_(std::move(model)), opts_(opts) {
  if (model_.velocity_independent()) {
    throw DegenerateLagrangian(model_.name() +
                               ": Lagrangian is degenerate in the velocities; the Hamiltonian cannot be defined");
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < samples; ++k) {
    const SamplePoint s = sample(model_.box(), rng);
    const double cond = velocity_hessian_condition(model_, s.q, s.v, s.S);
    if (!(cond < opts_.max_condition)) {
      throw DegenerateLagrangian(model_.name() + ": velocity Hessian condition number " + std::to_string(cond) +
                                 " exceeds the hyperregularity bound");
    }
    const Vec p = partial_legendre(model_, s.q, s.v, s.S);
    const Vec v = inverse_partial_legendre(model_, s.q, p, s.S, opts_);
    if (inf_norm(v - s.v) > 1e-8 * std::max(1.0, inf_norm(s.v))) {
      throw DegenerateLagrangian(model_.name() + ": Legendre map is not invertible on the domain box");
    }
  }
}

HamiltonianGradient HamiltonianModel::gradient(const Vec& q, const Vec& p, double S) const {
  const Index n = model_.n();
  const Vec v0 = velocity(q, p, S);
  const Mat Minv = velocity_hessian(model_, q, v0, S).vv.inverse();
  Vec z(2 * n + 1);
  z << q, S, p;
  auto [H, g] = value_and_gradient<double>(
      [&](const Vector<Dual1>& zd) {
        return hamiltonian_at<Dual1>(zd.head(n), zd.segment(n + 1, n), zd[n], v0, Minv);
      },
      z);
  if (!g.allFinite()) throw DomainError(model_.name() + ": non-finite Hamiltonian gradient");
  return {H, g.head(n), g[n], g.segment(n + 1, n)};
}

TemperatureFriction HamiltonianModel::temperature_and_friction(const Vec& q, const Vec& p, double S) const {
  const Vec v = velocity(q, p, S);
  return {-lagrangian_partials<double>(model_, q, v, S).LS, model_.friction<double>(q, v, S)};
}

ScalarField HamiltonianModel::hamiltonian_field() const {
  const Index n = model_.n();
  auto self = std::make_shared<HamiltonianModel>(*this);
  std::function<ScalarSig<double>> f0 = [self, n](const Vec& z) {
    return self->hamiltonian<double>(z.head(n), z.segment(n + 1, n), z[n]);
  };
  std::function<ScalarSig<Dual1>> f1 = [self, n](const Vector<Dual1>& z) {
    return self->hamiltonian<Dual1>(z.head(n), z.segment(n + 1, n), z[n]);
  };
  return {model_.name() + ".H", 2 * n + 1, PolyFunction<ScalarSig>(f0, f1)};
}

std::optional<HamiltonianModel> try_hamiltonian(const SimpleThermoModel& model, LegendreOptions opts) {
  try {
    return HamiltonianModel(model, opts);
  } catch (const DegenerateLagrangian&) {
    return std::nullopt;
  } catch (const NonConvergence&) {
    return std::nullopt;
  }
}

TemperatureFriction temperature_and_friction_N(const HamiltonianModel& h, const PointN& x) {
  return h.temperature_and_friction(x.q, x.p, x.S);
}

PointM embed_jL(const SimpleThermoModel& model, const PointN& x, const LegendreOptions& opts) {
  return {x.q, x.S, inverse_partial_legendre(model, x.q, x.p, x.S, opts), x.p};
}

PointM embed_jL(const HamiltonianModel& h, const PointN& x) { return embed_jL(h.source(), x, h.options()); }

PointP lift_M_to_P(const PointM& x, double Sdot) { return {x.q, x.S, x.v, Sdot, x.p, 0.0}; }

double generalized_energy(const SimpleThermoModel& model, const PointP& x) {
  return x.p.dot(x.v) + x.Lambda * x.W - model.lagrangian<double>(x.q, x.v, x.S);
}

double generalized_energy(const SimpleThermoModel& model, const PointM& x) {
  return x.p.dot(x.v) - model.lagrangian<double>(x.q, x.v, x.S);
}

double generalized_energy(Arena arena, const SimpleThermoModel& model, const ArenaPoint& x) {
  if (x.arena != arena) throw BaseMismatch("point does not lie on arena " + to_string(arena));
  switch (arena) {
    case Arena::P: return generalized_energy(model, PointP::from_coords(x.n, x.coords));
    case Arena::M: return generalized_energy(model, PointM::from_coords(x.n, x.coords));
    default:
      throw UnknownArena("generalized energy is defined on P and M only, not " + to_string(arena));
  }
}

}  // namespace dirac_thermo
