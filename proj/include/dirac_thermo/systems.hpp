#pragma once

#include <functional>

#include "dirac_thermo/model.hpp"

namespace dirac_thermo {

// ---------------------------------------------------------------------------
// Gas in a cylinder closed by a piston: L = m v^2 / 2 - U(S, N0, A x),
// friction -lambda(x, S) v.

/// lambda(x, S) = c0 + cx x + cS S.
struct AffineCoefficient {
  double c0 = 1.0;
  double cx = 0.0;
  double cS = 0.0;

  template <class T>
  T operator()(const T& x, const T& S) const {
    return T(c0) + T(cx) * x + T(cS) * S;
  }
};

struct PistonParams {
  double m = 1.0;
  double A = 1.0;
  double N0 = 1.0;
  double c = 1.5;
  double R = 8.314;
  double U0 = 3741.3;  // about 300 K at the reference state
  double S0 = 0.0;
  double V0 = 1.0;
  AffineCoefficient lambda{};
  double x_lo = 0.5, x_hi = 2.0;
  double v_lo = -5.0, v_hi = 5.0;
  double S_lo = -5.0, S_hi = 5.0;
};

/// U(S, N, V) of a perfect gas with constant heat capacity c R N.
template <class T>
T perfect_gas_energy(const PistonParams& P, const T& S, const T& N, const T& V) {
  using std::exp;
  using std::pow;
  return T(P.U0) * exp((S / N - T(P.S0 / P.N0)) / T(P.c * P.R)) * pow(N / T(P.N0), 1.0 / P.c + 1.0) *
         pow(T(P.V0) / V, 1.0 / P.c);
}

/// The gas energy as a field over (S, N, V).
ScalarField perfect_gas_field(const PistonParams& P);

/// Throws InvalidParameters on non-positive m, A, N0, c, R, U0, V0 or on a
/// negative friction coefficient anywhere in the box. `validate = false`
/// builds anyway, for deliberately broken fixtures.
SimpleThermoModel build_piston(const PistonParams& P, bool validate = true);

double piston_temperature(const PistonParams& P, double x, double S);
double piston_pressure(const PistonParams& P, double x, double S);

// ---------------------------------------------------------------------------
// Diffusion through a membrane between two reservoirs. Configuration
// w = (w1, w2, wm) with velocities the chemical potentials mu; L = -Phi(S, mu).
// Shipped potential: Phi = T0 S - sum_k (a_k mu_k^2 / 2 + Nbar_k mu_k), the
// transform of U = T0 S + sum_k (N_k - Nbar_k)^2 / (2 a_k).

struct MembraneParams {
  double T0 = 300.0;
  Eigen::Vector3d a{2.0, 2.0, 1.0};
  Eigen::Vector3d Nbar{1.0, 1.0, 0.5};
  double L1 = 0.5;
  double L2 = 0.8;
  double w_lo = -1.0, w_hi = 1.0;
  double mu_lo = -2.0, mu_hi = 2.0;
  double S_lo = -1.0, S_hi = 1.0;
};

template <class T>
T membrane_potential(const MembraneParams& P, const T& S, const Vector<T>& mu) {
  T phi = T(P.T0) * S;
  for (Index k = 0; k < 3; ++k) phi -= T(0.5 * P.a[k]) * mu[k] * mu[k] + T(P.Nbar[k]) * mu[k];
  return phi;
}

/// Phi as a field over (S, mu1, mu2, mum).
ScalarField membrane_potential_field(const MembraneParams& P);
/// U as a field over (S, N1, N2, Nm).
ScalarField membrane_energy_field(const MembraneParams& P);

/// Fluxes J1 = L1 (mum - mu1), J2 = L2 (mu2 - mum).
Eigen::Vector2d membrane_fluxes(const MembraneParams& P, const Vec& mu);

SimpleThermoModel build_membrane(const MembraneParams& P, bool validate = true);

// ---------------------------------------------------------------------------
// Reaction network. Configuration psi in R^r (degrees of advancement);
// N_I = N_I(t1) + sum_a nu(I, a) psi_a; L(psi, S) = -U(S, N); friction
// -lambda psi_dot with a constant r x r matrix.

struct ReactionParams {
  Mat nu;      // species x reactions, nu'' - nu'
  Vec masses;  // molecular weights
  Vec N_init;  // moles at t1
  Mat lambda;  // reactions x reactions
  /// U over (S, N_1, ..., N_R).
  PolyFunction<ScalarSig> U;
  double psi_lo = -1.0, psi_hi = 1.0;
  double S_lo = -1.0, S_hi = 1.0;
};

/// A <=> B with nu = (-1, +1), equal masses and U = T0 S + sum (N_I - N_I*)^2 / 2.
struct IsomerizationToy {
  double T0 = 300.0;
  double lambda = 2.0;
  Eigen::Vector2d N_init{1.0, 0.2};
  Eigen::Vector2d N_star{0.4, 0.6};

  ReactionParams params() const;
  /// (N_A0 - N_A*) - (N_B0 - N_B*) over 2.
  double psi_eq() const;
  /// Closed-form advancement psi(t) from psi(0) = psi0.
  double psi(double t, double psi0 = 0.0) const;
};

/// Throws LavoisierViolation if any reaction fails sum_I m_I nu(I, a) = 0, and
/// InvalidParameters if the symmetric part of lambda is not positive definite.
SimpleThermoModel build_reactions(const ReactionParams& P);

/// N(psi) for the reaction network.
Vec species_moles(const ReactionParams& P, const Vec& psi);

// ---------------------------------------------------------------------------
// Frictionless oscillator with a constant temperature term so that dL/dS < 0:
// L = v^2/2 - q^2/2 - T0 S.
SimpleThermoModel build_oscillator(double T0 = 300.0);

}  // namespace dirac_thermo
