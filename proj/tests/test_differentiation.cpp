#include <doctest.h>

#include <cmath>
#include <random>

#include "dirac_thermo/dirac_thermo.hpp"

using namespace dirac_thermo;

TEST_CASE("dual arithmetic matches hand derivatives") {
  const Dual1 x(0.7, 1.0);
  const Dual1 y = exp(x) * sin(x) / (x * x + 1.0);
  const double v = 0.7;
  const double f = std::exp(v) * std::sin(v) / (v * v + 1);
  const double df = (std::exp(v) * (std::sin(v) + std::cos(v)) * (v * v + 1) - std::exp(v) * std::sin(v) * 2 * v) /
                    ((v * v + 1) * (v * v + 1));
  CHECK(y.val == doctest::Approx(f).epsilon(1e-15));
  CHECK(y.eps == doctest::Approx(df).epsilon(1e-14));

  const Dual1 p = pow(x, 2.5);
  CHECK(p.eps == doctest::Approx(2.5 * std::pow(v, 1.5)).epsilon(1e-14));
  CHECK(sqrt(x).eps == doctest::Approx(0.5 / std::sqrt(v)).epsilon(1e-14));
  CHECK(log(x).eps == doctest::Approx(1.0 / v).epsilon(1e-14));
}

TEST_CASE("nested duals give second derivatives") {
  // f = x^3 y + exp(x y)
  ScalarField f{"f", 2, [](const auto& z) {
                  using std::exp;
                  return z[0] * z[0] * z[0] * z[1] + exp(z[0] * z[1]);
                }};
  const Vec z = (Vec(2) << 0.3, -1.2).finished();
  const double x = z[0], y = z[1], e = std::exp(x * y);
  const Vec g = grad(f, z);
  CHECK(g[0] == doctest::Approx(3 * x * x * y + y * e).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(x * x * x + x * e).epsilon(1e-14));
  const Mat H = hessian(f, z);
  CHECK(H(0, 0) == doctest::Approx(6 * x * y + y * y * e).epsilon(1e-14));
  CHECK(H(0, 1) == doctest::Approx(3 * x * x + e + x * y * e).epsilon(1e-14));
  CHECK(H(1, 1) == doctest::Approx(x * x * e).epsilon(1e-14));
  CHECK(symmetry_defect(H) < 1e-14);
  CHECK(evaluate(f, z) == doctest::Approx(x * x * x * y + e));
}

TEST_CASE("fd_check agrees with the dual-number gradient on smooth fields") {
  const PistonParams P;
  const ScalarField U = perfect_gas_field(P);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.6, 1.8);
  for (int k = 0; k < 20; ++k) {
    const Vec z = (Vec(3) << u(rng) - 1.0, u(rng), u(rng)).finished();
    CHECK(fd_check(U, z) < 1e-6);
  }
}

TEST_CASE("fd_check flags a wrong derivative") {
  // Dual-number branch deliberately disagrees with the double branch.
  PolyFunction<ScalarSig> bad(std::function<double(const Vec&)>([](const Vec& z) { return z[0] * z[0]; }),
                              std::function<Dual1(const Vector<Dual1>&)>(
                                  [](const Vector<Dual1>& z) { return z[0] * z[0] * z[0]; }));
  const ScalarField f{"bad", 1, bad};
  CHECK(fd_check(f, Vec::Constant(1, 2.0)) > 1e-2);
}

TEST_CASE("dimension mismatches are rejected") {
  const ScalarField f{"f", 2, [](const auto& z) { return z[0] + z[1]; }};
  CHECK_THROWS_AS(grad(f, Vec::Zero(3)), DimensionMismatch);
}
