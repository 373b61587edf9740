#include "dirac_thermo/model.hpp"

#include <sstream>

namespace dirac_thermo {

SamplePoint sample(const DomainBox& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](const Vec& lo, const Vec& hi) {
    Vec x(lo.size());
    for (Index i = 0; i < lo.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
    return x;
  };
  SamplePoint p;
  p.q = draw(box.q_lo, box.q_hi);
  p.v = draw(box.v_lo, box.v_hi);
  p.S = box.S_lo + (box.S_hi - box.S_lo) * u(rng);
  return p;
}

SimpleThermoModel::SimpleThermoModel(std::string name, Index n, PolyFunction<LagrangianSig> lagrangian,
                                     PolyFunction<ForceSig> friction, DomainBox box,
                                     PolyFunction<ForceSig> external, bool velocity_independent)
    : name_(std::move(name)),
      n_(n),
      lagrangian_(std::move(lagrangian)),
      friction_(std::move(friction)),
      external_(std::move(external)),
      box_(std::move(box)),
      velocity_independent_(velocity_independent) {
  if (n_ <= 0) throw InvalidParameters("model dimension must be positive");
  if (!lagrangian_ || !friction_) throw InvalidParameters("model needs a Lagrangian and a friction force");
  for (const Vec* b : {&box_.q_lo, &box_.q_hi, &box_.v_lo, &box_.v_hi}) require_size(b->size(), n_, "domain box");
}

ScalarField SimpleThermoModel::lagrangian_field() const {
  const Index n = n_;
  auto L = lagrangian_;
  auto eval = [n, L](const auto& z) {
    using T = typename std::decay_t<decltype(z)>::Scalar;
    return L.template get<T>()(z.head(n), z.segment(n, n), z[2 * n]);
  };
  return {name_ + ".L", 2 * n + 1, PolyFunction<ScalarSig>(eval)};
}

VelocityHessian velocity_hessian(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S) {
  const Index n = model.n();
  Vec z(2 * n + 1);
  z << q, v, S;
  const Mat H = hessian_of(
      [&](const Vector<Dual2>& zd) { return model.lagrangian<Dual2>(zd.head(n), zd.segment(n, n), zd[2 * n]); }, z);
  return {H.block(n, n, n, n), H.block(n, 0, n, n), H.block(n, 2 * n, n, 1)};
}

Mat force_jacobian(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S) {
  const Index n = model.n();
  Vec z(2 * n + 1);
  z << q, v, S;
  return jacobian_of<double>(
      [&](const Vector<Dual1>& zd) -> Vector<Dual1> {
        const Vector<Dual1> qd = zd.head(n), vd = zd.segment(n, n);
        return model.friction<Dual1>(qd, vd, zd[2 * n]) + model.external<Dual1>(qd, vd, zd[2 * n]);
      },
      z);
}

void check_temperature(const SimpleThermoModel& model, std::mt19937_64& rng, int count) {
  for (int k = 0; k < count; ++k) {
    const SamplePoint s = sample(model.box(), rng);
    const double LS = lagrangian_partials<double>(model, s.q, s.v, s.S).LS;
    if (!(LS < 0.0)) {
      std::ostringstream msg;
      msg << model.name() << ": dL/dS = " << LS << " >= 0 at S = " << s.S << " (temperature must be positive)";
      throw TemperatureViolation(msg.str());
    }
  }
}

}  // namespace dirac_thermo
