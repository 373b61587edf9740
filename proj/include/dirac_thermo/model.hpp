#pragma once

#include <random>
#include <string>

#include "dirac_thermo/differentiation.hpp"

namespace dirac_thermo {

template <class T>
using LagrangianSig = T(const Vector<T>& q, const Vector<T>& v, const T& S);
template <class T>
using ForceSig = Vector<T>(const Vector<T>& q, const Vector<T>& v, const T& S);

/// Sampling box for property checks: q in [q_lo, q_hi], v in [v_lo, v_hi], S in [S_lo, S_hi].
struct DomainBox {
  Vec q_lo, q_hi, v_lo, v_hi;
  double S_lo = 0.0, S_hi = 1.0;
};

struct SamplePoint {
  Vec q, v;
  double S = 0.0;
};

SamplePoint sample(const DomainBox& box, std::mt19937_64& rng);

// L(q, v, S) with friction and an optional external force. Immutable after
// construction; the evaluators are shared, never mutated.
class SimpleThermoModel {
 public:
  SimpleThermoModel(std::string name, Index n, PolyFunction<LagrangianSig> lagrangian,
                    PolyFunction<ForceSig> friction, DomainBox box, PolyFunction<ForceSig> external = {},
                    bool velocity_independent = false);

  const std::string& name() const { return name_; }
  Index n() const { return n_; }
  const DomainBox& box() const { return box_; }
  bool has_external() const { return static_cast<bool>(external_); }
  // The chemical-reaction regime: L carries no velocity dependence at all.
  bool velocity_independent() const { return velocity_independent_; }

  template <class T>
  T lagrangian(const Vector<T>& q, const Vector<T>& v, const T& S) const {
    check(q, v);
    return lagrangian_.get<T>()(q, v, S);
  }

  template <class T>
  Vector<T> friction(const Vector<T>& q, const Vector<T>& v, const T& S) const {
    check(q, v);
    Vector<T> F = friction_.get<T>()(q, v, S);
    require_size(F.size(), n_, "friction force");
    return F;
  }

  template <class T>
  Vector<T> external(const Vector<T>& q, const Vector<T>& v, const T& S) const {
    check(q, v);
    if (!external_) return Vector<T>::Constant(n_, T(0.0));
    Vector<T> F = external_.get<T>()(q, v, S);
    require_size(F.size(), n_, "external force");
    return F;
  }

  /// The Lagrangian as a flat field over (q, v, S), for generic derivative checks.
  ScalarField lagrangian_field() const;

 private:
  template <class T>
  void check(const Vector<T>& q, const Vector<T>& v) const {
    require_size(q.size(), n_, "configuration q");
    require_size(v.size(), n_, "velocity v");
  }

  std::string name_;
  Index n_;
  PolyFunction<LagrangianSig> lagrangian_;
  PolyFunction<ForceSig> friction_;
  PolyFunction<ForceSig> external_;
  DomainBox box_;
  bool velocity_independent_;
};

template <class T>
struct LagrangianPartials {
  T L{};
  Vector<T> Lq, Lv;
  T LS{};
};

/// First partials of L at scalar type T, computed by seeding Dual<T>.
template <class T>
LagrangianPartials<T> lagrangian_partials(const SimpleThermoModel& model, const Vector<T>& q,
                                          const Vector<T>& v, const T& S) {
  const Index n = model.n();
  Vector<T> z(2 * n + 1);
  z << q, v, S;
  auto f = [&](const Vector<Dual<T>>& zd) {
    return model.lagrangian<Dual<T>>(zd.head(n), zd.segment(n, n), zd[2 * n]);
  };
  auto [value, g] = value_and_gradient<T>(f, z);
  return {value, g.head(n), g.segment(n, n), g[2 * n]};
}

// Second-derivative blocks of L needed by the Euler-Lagrange solve.
struct VelocityHessian {
  Mat vv, vq;
  Vec vS;
};

VelocityHessian velocity_hessian(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S);

/// d(friction + external)/d(q, v, S) as an n x (2n+1) matrix.
Mat force_jacobian(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S);

/// Throws TemperatureViolation unless dL/dS < 0 at `count` random points of the box.
void check_temperature(const SimpleThermoModel& model, std::mt19937_64& rng, int count = 100);

}  // namespace dirac_thermo
