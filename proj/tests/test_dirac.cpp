#include <doctest.h>

#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "dirac_thermo/dirac_thermo.hpp"

using namespace dirac_thermo;

namespace {

// Independent construction of the induced Dirac structure
//   D = {(t, alpha) : t in Delta, alpha - i_t omega in Delta°}
// with Delta = {a dS = <f, dq>} and omega the canonical form of each arena,
// written from scratch here rather than through the library's row layout.
struct Oracle {
  Arena arena;
  Index n;
  double a;
  Vec f;

  Index dim() const { return arena_dimension(arena, n); }
  Layout lay() const { return layout(arena, n); }

  Vec flat(const Vec& t) const {
    const Layout l = lay();
    Vec w = Vec::Zero(dim());
    for (Index i = 0; i < n; ++i) {
      w[l.q + i] = -t[l.p + i];
      w[l.p + i] = t[l.q + i];
    }
    if (l.Lambda >= 0) {
      w[l.S] = -t[l.Lambda];
      w[l.Lambda] = t[l.S];
    }
    return w;
  }
  // Row c with Delta = ker c; the same vector spans Delta°.
  Vec constraint() const {
    const Layout l = lay();
    Vec c = Vec::Zero(dim());
    c.segment(l.q, n) = -f;
    c[l.S] = a;
    return c;
  }
  bool member(const Vec& t, const Vec& alpha, double tol) const {
    const Vec c = constraint();
    if (std::abs(c.dot(t)) > tol) return false;
    const Vec r = alpha - flat(t);
    const Vec off = r - c * (c.dot(r) / c.squaredNorm());
    return off.lpNorm<Eigen::Infinity>() <= tol;
  }
  // Random element of D.
  std::pair<Vec, Vec> sample(std::mt19937_64& rng) const {
    std::normal_distribution<double> g;
    const Vec c = constraint();
    Vec t = Vec::NullaryExpr(dim(), [&] { return g(rng); });
    t -= c * (c.dot(t) / c.squaredNorm());
    return {t, flat(t) + g(rng) * c};
  }
};

Oracle random_oracle(Arena arena, Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {arena, n, -1.0 - std::abs(g(rng)), Vec::NullaryExpr(n, [&] { return g(rng); })};
}

}  // namespace

TEST_CASE("membership agrees with the independent oracle") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (Arena arena : {Arena::P, Arena::TstarQ, Arena::M, Arena::N}) {
    for (Index n : {1, 3}) {
      for (int k = 0; k < 50; ++k) {
        const Oracle o = random_oracle(arena, n, rng);
        const ConstraintCoefficients c{o.a, o.f};
        auto [t, alpha] = o.sample(rng);
        CHECK(o.member(t, alpha, 1e-9));
        CHECK(is_member(dirac_membership(arena, c, t, alpha)));

        // A generic perturbation leaves D for both.
        const Vec dt = Vec::NullaryExpr(t.size(), [&] { return g(rng); });
        const Vec da = Vec::NullaryExpr(t.size(), [&] { return g(rng); });
        CHECK_FALSE(o.member(t + dt, alpha + da, 1e-6));
        CHECK_FALSE(is_member(dirac_membership(arena, c, t + dt, alpha + da)));
      }
    }
  }
}

TEST_CASE("the computed basis spans exactly the oracle's subspace") {
  std::mt19937_64 rng(12);
  for (Arena arena : {Arena::P, Arena::TstarQ, Arena::M, Arena::N}) {
    const Index n = 2;
    const Oracle o = random_oracle(arena, n, rng);
    const ArenaPoint base(arena, n, Vec::Zero(o.dim()));
    const DiracBasis B = dirac_basis(ConstraintCoefficients{o.a, o.f}, base);
    CHECK(B.dimension == o.dim());
    CHECK(B.rank == o.dim());
    CHECK(B.isotropy_defect < 1e-12);
    for (const TangentCovectorPair& e : B.basis) CHECK(o.member(e.tangent, e.covector, 1e-10));
    for (int k = 0; k < 10; ++k) {
      auto [t, alpha] = o.sample(rng);
      CHECK(distance_to_span(B, t, alpha) < 1e-10);
    }
  }
}

TEST_CASE("zero friction keeps full dimension") {
  const ArenaPoint base(Arena::N, 1, Vec::Zero(3));
  const DiracBasis B = dirac_basis(ConstraintCoefficients{-300.0, Vec::Zero(1)}, base);
  CHECK(B.dimension == 3);
  CHECK(B.rank == 3);
}

TEST_CASE("vanishing dL/dS is a degenerate point") {
  const ArenaPoint base(Arena::M, 1, Vec::Zero(4));
  CHECK_THROWS_AS(dirac_basis(ConstraintCoefficients{0.0, Vec::Ones(1)}, base), DegeneratePoint);
}

TEST_CASE("membership on a model checks the arena of the inputs") {
  const SimpleThermoModel piston = build_piston(PistonParams{});
  const PointM m{Vec::Constant(1, 1.0), 0.0, Vec::Constant(1, 0.5), Vec::Constant(1, 0.5)};
  const ArenaPoint base(m);
  const TangentVector t{base, Vec::Zero(4)};
  const Covector c{base, Vec::Zero(4)};
  CHECK_THROWS_AS(dirac_membership(Arena::N, piston, t, c), UnknownArena);
}

TEST_CASE("isotropy holds at random model points (property)") {
  std::mt19937_64 rng(13);
  const SimpleThermoModel membrane = build_membrane(MembraneParams{});
  for (const IsotropySummary& s : isotropy_suite(membrane, rng, 30)) {
    CHECK(s.available);
    CHECK(s.dimension_ok);
    CHECK(s.rank_ok);
    CHECK(s.max_isotropy_defect < 1e-10);
  }
}

TEST_CASE("constraint helpers share one code path") {
  const SimpleThermoModel piston = build_piston(PistonParams{});
  const Vec q = Vec::Constant(1, 1.2), v = Vec::Constant(1, -0.7);
  const double S = 0.3, Sdot = 0.01;
  CHECK(phenomenological_constraint_residual(piston, q, v, S, Sdot) ==
        variational_constraint_residual(piston, q, v, S, v, Sdot));
  // The constraint row annihilates every admissible variation.
  const Eigen::RowVectorXd row = constraint_row(piston, q, v, S);
  const double a = row[1], f = -row[0];
  const Vec dq = Vec::Constant(1, 0.4);
  const double dS = f * dq[0] / a;
  CHECK(std::abs(variational_constraint_residual(piston, q, v, S, dq, dS)) < 1e-12);
  CHECK(annihilator_residual(piston, q, v, S, Vec::Constant(1, -f), a).norm() == doctest::Approx(0.0).epsilon(1e-12));
}
