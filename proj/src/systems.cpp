#include "dirac_thermo/systems.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace dirac_thermo {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw InvalidParameters(std::string(what) + " must be positive");
}

Vec gas_gradient(const PistonParams& P, double x, double S) {
  Vec z(3);
  z << S, P.N0, P.A * x;
  return value_and_gradient<double>(
             [&](const Vector<Dual1>& zd) { return perfect_gas_energy<Dual1>(P, zd[0], zd[1], zd[2]); }, z)
      .second;
}

}  // namespace

ScalarField perfect_gas_field(const PistonParams& P) {
  auto f = [P](const auto& z) {
    using T = typename std::decay_t<decltype(z)>::Scalar;
    return perfect_gas_energy<T>(P, z[0], z[1], z[2]);
  };
  return {"perfect_gas.U", 3, PolyFunction<ScalarSig>(f)};
}

double piston_temperature(const PistonParams& P, double x, double S) { return gas_gradient(P, x, S)[0]; }

double piston_pressure(const PistonParams& P, double x, double S) { return -gas_gradient(P, x, S)[2]; }

SimpleThermoModel build_piston(const PistonParams& P, bool validate) {
  require_positive(P.m, "piston mass m");
  require_positive(P.A, "piston area A");
  require_positive(P.N0, "mole number N0");
  require_positive(P.c, "heat-capacity factor c");
  require_positive(P.R, "gas constant R");
  require_positive(P.U0, "reference energy U0");
  require_positive(P.V0, "reference volume V0");
  if (!(P.x_lo > 0.0 && P.x_hi > P.x_lo)) throw InvalidParameters("piston position range must be positive");
  if (validate) {
    for (double x : {P.x_lo, P.x_hi}) {
      for (double S : {P.S_lo, P.S_hi}) {
        if (P.lambda(x, S) < 0.0) {
          std::ostringstream msg;
          msg << "friction coefficient lambda(" << x << ", " << S << ") = " << P.lambda(x, S) << " is negative";
          throw InvalidParameters(msg.str());
        }
      }
    }
  }

  auto L = [P](const auto& q, const auto& v, const auto& S) {
    using T = typename std::decay_t<decltype(q)>::Scalar;
    return T(0.5 * P.m) * v[0] * v[0] - perfect_gas_energy<T>(P, S, T(P.N0), T(P.A) * q[0]);
  };
  auto friction = [P](const auto& q, const auto& v, const auto& S) {
    using T = typename std::decay_t<decltype(q)>::Scalar;
    Vector<T> F(1);
    F[0] = -P.lambda(q[0], S) * v[0];
    return F;
  };
  DomainBox box{Vec::Constant(1, P.x_lo), Vec::Constant(1, P.x_hi), Vec::Constant(1, P.v_lo),
                Vec::Constant(1, P.v_hi), P.S_lo, P.S_hi};
  SimpleThermoModel model("piston", 1, L, friction, box);
  if (validate) {
    std::mt19937_64 rng(17);
    check_temperature(model, rng);
  }
  return model;
}

// ---------------------------------------------------------------------------

ScalarField membrane_potential_field(const MembraneParams& P) {
  auto f = [P](const auto& z) {
    using T = typename std::decay_t<decltype(z)>::Scalar;
    return membrane_potential<T>(P, z[0], Vector<T>(z.tail(3)));
  };
  return {"membrane.Phi", 4, PolyFunction<ScalarSig>(f)};
}

ScalarField membrane_energy_field(const MembraneParams& P) {
  auto f = [P](const auto& z) {
    using T = typename std::decay_t<decltype(z)>::Scalar;
    T U = T(P.T0) * z[0];
    for (Index k = 0; k < 3; ++k) {
      const T d = z[k + 1] - T(P.Nbar[k]);
      U += d * d / T(2.0 * P.a[k]);
    }
    return U;
  };
  return {"membrane.U", 4, PolyFunction<ScalarSig>(f)};
}

Eigen::Vector2d membrane_fluxes(const MembraneParams& P, const Vec& mu) {
  require_size(mu.size(), 3, "chemical potentials");
  return {P.L1 * (mu[2] - mu[0]), P.L2 * (mu[1] - mu[2])};
}

SimpleThermoModel build_membrane(const MembraneParams& P, bool validate) {
  require_positive(P.T0, "membrane temperature scale T0");
  for (Index k = 0; k < 3; ++k) require_positive(P.a[k], "membrane capacity a_k");
  if (validate && (P.L1 < 0.0 || P.L2 < 0.0)) {
    throw InvalidParameters("membrane transport coefficients L1, L2 must be nonnegative");
  }
  auto L = [P](const auto& q, const auto& v, const auto& S) {
    using T = typename std::decay_t<decltype(q)>::Scalar;
    return -membrane_potential<T>(P, S, v);
  };
  // <F, dw> = J1 (dw1 - dwm) + J2 (dwm - dw2), with the rates mu = w_dot.
  auto friction = [P](const auto& q, const auto& v, const auto&) {
    using T = typename std::decay_t<decltype(q)>::Scalar;
    const T J1 = T(P.L1) * (v[2] - v[0]);
    const T J2 = T(P.L2) * (v[1] - v[2]);
    Vector<T> F(3);
    F << J1, -J2, J2 - J1;
    return F;
  };
  DomainBox box{Vec::Constant(3, P.w_lo), Vec::Constant(3, P.w_hi), Vec::Constant(3, P.mu_lo),
                Vec::Constant(3, P.mu_hi), P.S_lo, P.S_hi};
  SimpleThermoModel model("membrane", 3, L, friction, box);
  if (validate) {
    std::mt19937_64 rng(29);
    check_temperature(model, rng);
    // The velocity Hessian of -Phi must be definite for N = dL/dmu to invert.
    for (int k = 0; k < 20; ++k) {
      const SamplePoint s = sample(box, rng);
      const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(velocity_hessian(model, s.q, s.v, s.S).vv).eigenvalues();
      if (!(ev.minCoeff() > 0.0 || ev.maxCoeff() < 0.0)) {
        throw InvalidParameters("membrane potential is not strictly concave or convex in the chemical potentials");
      }
    }
  }
  return model;
}

// ---------------------------------------------------------------------------

Vec species_moles(const ReactionParams& P, const Vec& psi) { return P.N_init + P.nu * psi; }

SimpleThermoModel build_reactions(const ReactionParams& P) {
  const Index R = P.nu.rows(), r = P.nu.cols();
  if (R == 0 || r == 0) throw InvalidParameters("reaction network needs species and reactions");
  require_size(P.masses.size(), R, "molecular weights");
  require_size(P.N_init.size(), R, "initial moles");
  if (P.lambda.rows() != r || P.lambda.cols() != r) throw DimensionMismatch("friction matrix must be r x r");
  if (!P.U) throw InvalidParameters("reaction network needs an internal energy");

  for (Index a = 0; a < r; ++a) {
    const double balance = P.masses.dot(P.nu.col(a));
    if (std::abs(balance) > 1e-12 * std::max(1.0, P.masses.cwiseAbs().dot(P.nu.col(a).cwiseAbs()))) {
      std::ostringstream msg;
      msg << "reaction " << a << " violates mass conservation: sum m_I nu_I = " << balance;
      throw LavoisierViolation(msg.str());
    }
  }
  const Mat sym = 0.5 * (P.lambda + P.lambda.transpose());
  if (!(Eigen::SelfAdjointEigenSolver<Mat>(sym).eigenvalues().minCoeff() > 0.0)) {
    throw InvalidParameters("symmetric part of the reaction friction matrix must be positive definite");
  }

  auto L = [P, R](const auto& psi, const auto& v, const auto& S) {
    using T = typename std::decay_t<decltype(psi)>::Scalar;
    Vector<T> z(R + 1);
    z[0] = S;
    for (Index I = 0; I < R; ++I) {
      T N = T(P.N_init[I]);
      for (Index a = 0; a < psi.size(); ++a) N += T(P.nu(I, a)) * psi[a];
      z[I + 1] = N;
    }
    (void)v;
    return -P.U.template get<T>()(z);
  };
  auto friction = [P, r](const auto& psi, const auto& v, const auto& S) {
    using T = typename std::decay_t<decltype(psi)>::Scalar;
    (void)S;
    Vector<T> F(r);
    for (Index a = 0; a < r; ++a) {
      T acc(0.0);
      for (Index b = 0; b < r; ++b) acc -= T(P.lambda(a, b)) * v[b];
      F[a] = acc;
    }
    return F;
  };
  DomainBox box{Vec::Constant(r, P.psi_lo), Vec::Constant(r, P.psi_hi), Vec::Constant(r, -1.0),
                Vec::Constant(r, 1.0), P.S_lo, P.S_hi};
  SimpleThermoModel model("reactions", r, L, friction, box, {}, true);
  std::mt19937_64 rng(43);
  check_temperature(model, rng);
  return model;
}

ReactionParams IsomerizationToy::params() const {
  ReactionParams P;
  P.nu.resize(2, 1);
  P.nu << -1.0, 1.0;
  P.masses = Vec::Ones(2);
  P.N_init = N_init;
  P.lambda = Mat::Constant(1, 1, lambda);
  const double T0_ = T0;
  const Eigen::Vector2d star = N_star;
  P.U = [T0_, star](const auto& z) {
    using T = typename std::decay_t<decltype(z)>::Scalar;
    T U = T(T0_) * z[0];
    for (Index I = 0; I < 2; ++I) {
      const T d = z[I + 1] - T(star[I]);
      U += T(0.5) * d * d;
    }
    return U;
  };
  return P;
}

double IsomerizationToy::psi_eq() const { return 0.5 * ((N_init[0] - N_star[0]) - (N_init[1] - N_star[1])); }

double IsomerizationToy::psi(double t, double psi0) const {
  const double e = psi_eq();
  return e + (psi0 - e) * std::exp(-2.0 * t / lambda);
}

// ---------------------------------------------------------------------------

SimpleThermoModel build_oscillator(double T0) {
  require_positive(T0, "temperature scale T0");
  auto L = [T0](const auto& q, const auto& v, const auto& S) {
    using T = typename std::decay_t<decltype(q)>::Scalar;
    return T(0.5) * v[0] * v[0] - T(0.5) * q[0] * q[0] - T(T0) * S;
  };
  auto friction = [](const auto& q, const auto& v, const auto& S) {
    using T = typename std::decay_t<decltype(q)>::Scalar;
    (void)v;
    (void)S;
    return Vector<T>(Vector<T>::Constant(q.size(), T(0.0)));
  };
  DomainBox box{Vec::Constant(1, -2.0), Vec::Constant(1, 2.0), Vec::Constant(1, -2.0), Vec::Constant(1, 2.0), -1.0,
                1.0};
  return SimpleThermoModel("oscillator", 1, L, friction, box);
}

}  // namespace dirac_thermo
