#pragma once

#include <vector>

#include "dirac_thermo/arena.hpp"
#include "dirac_thermo/model.hpp"

namespace dirac_thermo {

// Coefficients of the variational constraint a * dS = <f, dq> at a base point.
// On P and M, a = dL/dS and f = F^fr at the stored velocity; on TstarQ and N
// the velocity comes from the inverse Legendre map, giving a = -T and f = the
// friction re-expressed in momenta.
struct ConstraintCoefficients {
  double a = 0.0;
  Vec f;
};

ConstraintCoefficients constraint_coefficients(const SimpleThermoModel& model, const ArenaPoint& base);

// Local conditions of the induced Dirac structure, stacked into one vector of
// length dim. Tangent and covector use the arena's flat coordinate order.
//   rows 0..n-1   (pdot + alpha) a + (Lambdadot + tau) f
//   row  n        a Sdot - <f, qdot>
//   then beta (M, P), Upsilon (P), u - qdot, Psi - Sdot (P, TstarQ)
template <class T>
Vector<T> dirac_rows(Arena arena, Index n, const T& a, const Vector<T>& f, const Vector<T>& tangent,
                     const Vector<T>& covector) {
  const Layout l = layout(arena, n);
  require_size(tangent.size(), l.dim, "tangent vector");
  require_size(covector.size(), l.dim, "covector");
  require_size(f.size(), n, "constraint force");
  Vector<T> r(l.dim);
  const T Lambda_dot = l.Lambda >= 0 ? tangent[l.Lambda] : T(0.0);
  for (Index i = 0; i < n; ++i) {
    r[i] = (tangent[l.p + i] + covector[l.q + i]) * a + (Lambda_dot + covector[l.S]) * f[i];
  }
  T rate_row = a * tangent[l.S];
  for (Index i = 0; i < n; ++i) rate_row -= f[i] * tangent[l.q + i];
  r[n] = rate_row;
  Index k = n + 1;
  if (l.v >= 0) {
    for (Index i = 0; i < n; ++i) r[k++] = covector[l.v + i];
  }
  if (l.W >= 0) r[k++] = covector[l.W];
  for (Index i = 0; i < n; ++i) r[k++] = covector[l.p + i] - tangent[l.q + i];
  if (l.Lambda >= 0) r[k++] = covector[l.Lambda] - tangent[l.S];
  return r;
}

Vec dirac_membership(Arena arena, const ConstraintCoefficients& c, const Vec& tangent, const Vec& covector);
Vec dirac_membership(Arena arena, const SimpleThermoModel& model, const TangentVector& tangent,
                     const Covector& covector);
Vec dirac_membership(const SimpleThermoModel& model, const TangentCovectorPair& pair);

inline constexpr double kMembershipTolerance = 1e-9;

inline bool is_member(const Vec& residual, double tol = kMembershipTolerance) { return inf_norm(residual) <= tol; }

/// The dim x 2dim matrix C with C [tangent; covector] = dirac_rows(...).
Mat dirac_condition_matrix(Arena arena, Index n, const ConstraintCoefficients& c);

struct DiracBasis {
  Arena arena = Arena::M;
  ArenaPoint base;
  std::vector<TangentCovectorPair> basis;
  Index dimension = 0;
  Index rank = 0;
  double isotropy_defect = 0.0;

  /// Basis vectors as columns of a 2dim x dimension matrix, [tangent; covector].
  Mat matrix() const;
};

DiracBasis dirac_basis(Arena arena, const SimpleThermoModel& model, const ArenaPoint& base);
DiracBasis dirac_basis(const ConstraintCoefficients& c, const ArenaPoint& base);

/// Max |<<e_i, e_j>>| over the columns of B (each column a stacked [tangent; covector]).
double isotropy_defect(const Mat& B);

/// Distance from the stacked vector [tangent; covector] to the span of the basis.
double distance_to_span(const DiracBasis& basis, const Vec& tangent, const Vec& covector);

}  // namespace dirac_thermo
