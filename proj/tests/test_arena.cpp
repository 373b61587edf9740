#include <doctest.h>

#include <random>

#include "dirac_thermo/dirac_thermo.hpp"

using namespace dirac_thermo;

TEST_CASE("arena dimensions") {
  for (Index n : {1, 2, 3, 5}) {
    CHECK(arena_dimension(Arena::P, n) == 3 * n + 3);
    CHECK(arena_dimension(Arena::TstarQ, n) == 2 * n + 2);
    CHECK(arena_dimension(Arena::M, n) == 3 * n + 1);
    CHECK(arena_dimension(Arena::N, n) == 2 * n + 1);
    CHECK(layout(Arena::P, n).dim == 3 * n + 3);
  }
}

TEST_CASE("arena names round trip") {
  for (Arena a : {Arena::P, Arena::TstarQ, Arena::M, Arena::N}) CHECK(arena_from_string(to_string(a)) == a);
  CHECK(arena_from_string("T*Q") == Arena::TstarQ);
  CHECK_THROWS_AS(arena_from_string("Q"), UnknownArena);
}

TEST_CASE("point coordinates round trip in the documented order") {
  const PointP x{(Vec(2) << 1, 2).finished(), 3, (Vec(2) << 4, 5).finished(), 6, (Vec(2) << 7, 8).finished(), 9};
  const Vec c = x.coords();
  CHECK(c.size() == 9);
  for (Index i = 0; i < 9; ++i) CHECK(c[i] == doctest::Approx(i + 1));
  const PointP y = PointP::from_coords(2, c);
  CHECK(y.W == 6);
  CHECK(y.Lambda == 9);
  CHECK_THROWS_AS(PointP::from_coords(2, Vec::Zero(8)), DimensionMismatch);

  const PointM m = PointM::from_coords(1, (Vec(4) << 1, 2, 3, 4).finished());
  CHECK(m.S == 2);
  CHECK(m.v[0] == 3);
  CHECK(m.p[0] == 4);
}

TEST_CASE("pairings on mismatched bases are rejected") {
  const ArenaPoint a(Arena::N, 1, (Vec(3) << 1, 0, 0).finished());
  const ArenaPoint b(Arena::N, 1, (Vec(3) << 1, 0, 1e-3).finished());
  CHECK(same_base(a, a));
  CHECK_FALSE(same_base(a, b));
  const TangentCovectorPair x(a, Vec::Ones(3), Vec::Ones(3));
  const TangentCovectorPair y(b, Vec::Ones(3), Vec::Ones(3));
  CHECK_THROWS_AS(double_pairing(x, y), BaseMismatch);
  CHECK(double_pairing(x, x) == doctest::Approx(6.0));
}

TEST_CASE("presymplectic form is antisymmetric with the expected kernel") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (Arena a : {Arena::P, Arena::TstarQ, Arena::M, Arena::N}) {
    const Index n = 2, dim = arena_dimension(a, n);
    const ArenaPoint pt(a, n, Vec::Zero(dim));
    const Vec t1 = Vec::NullaryExpr(dim, [&] { return g(rng); });
    const Vec t2 = Vec::NullaryExpr(dim, [&] { return g(rng); });
    CHECK(presymplectic_pairing(a, pt, t1, t2) == doctest::Approx(-presymplectic_pairing(a, pt, t2, t1)));
    CHECK(presymplectic_pairing(a, pt, t1, t2) == doctest::Approx(presymplectic_flat(a, n, t1).dot(t2)));
  }
  // On M the S and v directions are in the kernel of dq ^ dp.
  Vec t = Vec::Zero(4);
  t[1] = 1.0;
  t[2] = 1.0;
  CHECK(presymplectic_flat(Arena::M, 1, t).isZero());
  // On TstarQ dS ^ dLambda pairs S with Lambda.
  Vec s = Vec::Zero(4), l = Vec::Zero(4);
  s[1] = 1.0;
  l[3] = 1.0;
  CHECK(presymplectic_pairing(Arena::TstarQ, ArenaPoint(Arena::TstarQ, 1, Vec::Zero(4)), s, l) == doctest::Approx(1.0));
}
