#include <doctest.h>

#include <random>

#include "dirac_thermo/dirac_thermo.hpp"

using namespace dirac_thermo;

TEST_CASE("piston parameter validation") {
  PistonParams P;
  P.lambda = {-0.1, 0.0, 0.0};
  CHECK_THROWS_AS(build_piston(P), InvalidParameters);
  CHECK_NOTHROW(build_piston(P, false));
  PistonParams Q;
  Q.m = 0.0;
  CHECK_THROWS_AS(build_piston(Q), InvalidParameters);
  // Sign is checked over the whole box, not just at the origin.
  PistonParams R;
  R.lambda = {1.0, -1.0, 0.0};  // negative for x > 1
  CHECK_THROWS_AS(build_piston(R), InvalidParameters);
}

TEST_CASE("perfect-gas law") {
  const PistonParams P;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(P.x_lo, P.x_hi), uS(P.S_lo, P.S_hi);
  for (int k = 0; k < 100; ++k) {
    const double x = ux(rng), S = uS(rng);
    const double pV = piston_pressure(P, x, S) * P.A * x;
    CHECK(pV == doctest::Approx(P.N0 * P.R * piston_temperature(P, x, S)).epsilon(1e-12));
  }
}

TEST_CASE("membrane friction reproduces the flux law") {
  const MembraneParams P;
  const SimpleThermoModel m = build_membrane(P);
  const Vec mu = (Vec(3) << 0.3, -0.2, 0.9).finished();
  const Eigen::Vector2d J = membrane_fluxes(P, mu);
  CHECK(J[0] == doctest::Approx(P.L1 * (mu[2] - mu[0])));
  CHECK(J[1] == doctest::Approx(P.L2 * (mu[1] - mu[2])));
  const Vec F = m.friction<double>(Vec::Zero(3), mu, 0.0);
  const Vec dw = (Vec(3) << 0.1, -0.4, 0.25).finished();
  CHECK(F.dot(dw) == doctest::Approx(J[0] * (dw[0] - dw[2]) + J[1] * (dw[2] - dw[1])));
  // -T Sdot = <F, mu> <= 0.
  CHECK(F.dot(mu) == doctest::Approx(-P.L1 * std::pow(mu[0] - mu[2], 2) - P.L2 * std::pow(mu[1] - mu[2], 2)));

  MembraneParams bad;
  bad.L2 = -0.1;
  CHECK_THROWS_AS(build_membrane(bad), InvalidParameters);
}

TEST_CASE("Lavoisier check") {
  ReactionParams P = IsomerizationToy{}.params();
  CHECK_NOTHROW(build_reactions(P));
  P.nu << -1.0, 2.0;
  CHECK_THROWS_AS(build_reactions(P), LavoisierViolation);
  // 2 A -> B with m_B = 2 m_A balances.
  P.masses << 1.0, 2.0;
  P.nu << -2.0, 1.0;
  CHECK_NOTHROW(build_reactions(P));
}

TEST_CASE("reaction friction must be positive definite") {
  ReactionParams P = IsomerizationToy{}.params();
  P.lambda(0, 0) = -1.0;
  CHECK_THROWS_AS(build_reactions(P), InvalidParameters);
}

TEST_CASE("species moles follow the stoichiometry") {
  const IsomerizationToy toy;
  const ReactionParams P = toy.params();
  const Vec N = species_moles(P, Vec::Constant(1, 0.3));
  CHECK(N[0] == doctest::Approx(0.7));
  CHECK(N[1] == doctest::Approx(0.5));
  CHECK(toy.psi_eq() == doctest::Approx(0.5));
  CHECK(toy.psi(0.0) == 0.0);
}

TEST_CASE("temperature must be positive on the box") {
  auto L = [](const auto& q, const auto& v, const auto& S) {
    using T = typename std::decay_t<decltype(q)>::Scalar;
    return T(0.5) * v[0] * v[0] + T(10.0) * S;  // dL/dS > 0
  };
  auto F = [](const auto& q, const auto&, const auto&) {
    using T = typename std::decay_t<decltype(q)>::Scalar;
    return Vector<T>(Vector<T>::Zero(1));
  };
  const SimpleThermoModel m("cold", 1, L, F, DomainBox{Vec::Zero(1), Vec::Ones(1), Vec::Zero(1), Vec::Ones(1), 0, 1});
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(check_temperature(m, rng), TemperatureViolation);
}
