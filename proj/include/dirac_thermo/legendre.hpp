#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/LU>

#include "dirac_thermo/arena.hpp"
#include "dirac_thermo/model.hpp"

namespace dirac_thermo {

struct LegendreOptions {
  double tol = 1e-12;          // on |dL/dv - p|_inf, relative to max(1, |p|_inf)
  int max_iter = 50;
  double max_condition = 1e8;  // velocity-Hessian condition number accepted as regular
};

/// p = dL/dv(q, v, S).
Vec partial_legendre(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S);

/// Solves dL/dv(q, v, S) = p for v by Newton, seeded at zero unless a warm start is given.
Vec inverse_partial_legendre(const SimpleThermoModel& model, const Vec& q, const Vec& p, double S,
                             const LegendreOptions& opts = {}, const Vec* warm_start = nullptr);

double velocity_hessian_condition(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S);

struct HamiltonianGradient {
  double H = 0.0;
  Vec Hq;
  double HS = 0.0;
  Vec Hp;
};

struct TemperatureFriction {
  double T = 0.0;
  Vec F;
};

// H(q, p, S) = <p, v> - L(q, v, S) with v = v(q, p, S). Construction checks
// hyperregularity on samples of the model's box and throws
// DegenerateLagrangian when it fails.
class HamiltonianModel {
 public:
  explicit HamiltonianModel(SimpleThermoModel model, LegendreOptions opts = {}, int samples = 100,
                            std::uint64_t seed = 0x5eedULL);

  const SimpleThermoModel& source() const { return model_; }
  const LegendreOptions& options() const { return opts_; }
  Index n() const { return model_.n(); }

  Vec velocity(const Vec& q, const Vec& p, double S) const {
    return inverse_partial_legendre(model_, q, p, S, opts_);
  }

  // Supported for double and Dual1. Derivatives pass through the inverse
  // Legendre map by one Newton correction carried out in dual arithmetic
  // from the converged double solution.
  template <class T>
  T hamiltonian(const Vector<T>& q, const Vector<T>& p, const T& S) const {
    const Vec v0 = velocity(values_of(q), values_of(p), value_of(S));
    if constexpr (std::is_same_v<T, double>) {
      return p.dot(v0) - model_.lagrangian<double>(q, v0, S);
    } else {
      const Mat Minv = velocity_hessian(model_, values_of(q), v0, value_of(S)).vv.inverse();
      return hamiltonian_at<T>(q, p, S, v0, Minv);
    }
  }

  double hamiltonian(const PointN& x) const { return hamiltonian<double>(x.q, x.p, x.S); }

  HamiltonianGradient gradient(const Vec& q, const Vec& p, double S) const;
  TemperatureFriction temperature_and_friction(const Vec& q, const Vec& p, double S) const;

  /// H as a flat field over (q, S, p); first derivatives only.
  ScalarField hamiltonian_field() const;

 private:
  template <class T>
  T hamiltonian_at(const Vector<T>& q, const Vector<T>& p, const T& S, const Vec& v0, const Mat& Minv) const {
    const Index n = model_.n();
    Vector<T> v = lift<T>(v0);
    const Vector<T> res = lagrangian_partials<T>(model_, q, v, S).Lv - p;
    for (Index i = 0; i < n; ++i) {
      T corr(0.0);
      for (Index j = 0; j < n; ++j) corr += Minv(i, j) * res[j];
      v[i] -= corr;
    }
    return dot<T>(p, v) - model_.lagrangian<T>(q, v, S);
  }

  SimpleThermoModel model_;
  LegendreOptions opts_;
};

/// Nullopt when the model is degenerate (the Lagrangian-side-only case).
std::optional<HamiltonianModel> try_hamiltonian(const SimpleThermoModel& model, LegendreOptions opts = {});

TemperatureFriction temperature_and_friction_N(const HamiltonianModel& h, const PointN& x);

/// j_L(q, S, p) = (q, S, v(q, p, S), p).
PointM embed_jL(const SimpleThermoModel& model, const PointN& x, const LegendreOptions& opts = {});
PointM embed_jL(const HamiltonianModel& h, const PointN& x);

/// (q, S, v, p) -> (q, S, v, W = Sdot, p, Lambda = 0).
PointP lift_M_to_P(const PointM& x, double Sdot);

/// <p, v> + Lambda W - L on P; <p, v> - L on M.
double generalized_energy(Arena arena, const SimpleThermoModel& model, const ArenaPoint& x);
double generalized_energy(const SimpleThermoModel& model, const PointP& x);
double generalized_energy(const SimpleThermoModel& model, const PointM& x);

}  // namespace dirac_thermo
