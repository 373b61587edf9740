#include "dirac_thermo/dirac.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "dirac_thermo/legendre.hpp"

namespace dirac_thermo {

ConstraintCoefficients constraint_coefficients(const SimpleThermoModel& model, const ArenaPoint& base) {
  if (base.n != model.n()) throw DimensionMismatch("base point dimension differs from the model's");
  const Layout l = layout(base.arena, base.n);
  const Vec q = base.q();
  const double S = base.S();
  Vec v;
  if (l.v >= 0) {
    v = base.coords.segment(l.v, base.n);
  } else {
    v = inverse_partial_legendre(model, q, base.p(), S);
  }
  return {lagrangian_partials<double>(model, q, v, S).LS, model.friction<double>(q, v, S)};
}

Vec dirac_membership(Arena arena, const ConstraintCoefficients& c, const Vec& tangent, const Vec& covector) {
  return dirac_rows<double>(arena, c.f.size(), c.a, c.f, tangent, covector);
}

Vec dirac_membership(const SimpleThermoModel& model, const TangentCovectorPair& pair) {
  const ConstraintCoefficients c = constraint_coefficients(model, pair.base);
  return dirac_membership(pair.base.arena, c, pair.tangent, pair.covector);
}

Vec dirac_membership(Arena arena, const SimpleThermoModel& model, const TangentVector& tangent,
                     const Covector& covector) {
  if (tangent.base.arena != arena) {
    throw UnknownArena("membership requested on arena " + to_string(arena) + " for a point on " +
                       to_string(tangent.base.arena));
  }
  return dirac_membership(model, TangentCovectorPair(tangent, covector));
}

Mat dirac_condition_matrix(Arena arena, Index n, const ConstraintCoefficients& c) {
  const Index dim = arena_dimension(arena, n);
  Mat C(dim, 2 * dim);
  Vec t = Vec::Zero(dim), a = Vec::Zero(dim);
  for (Index j = 0; j < 2 * dim; ++j) {
    Vec& target = j < dim ? t : a;
    const Index k = j < dim ? j : j - dim;
    target[k] = 1.0;
    C.col(j) = dirac_membership(arena, c, t, a);
    target[k] = 0.0;
  }
  return C;
}

double isotropy_defect(const Mat& B) {
  const Index dim = B.rows() / 2;
  Mat G = B.topRows(dim).transpose() * B.bottomRows(dim);
  G += G.transpose().eval();
  return G.size() == 0 ? 0.0 : G.cwiseAbs().maxCoeff();
}

Mat DiracBasis::matrix() const {
  const Index dim = base.dim();
  Mat B(2 * dim, static_cast<Index>(basis.size()));
  for (Index j = 0; j < B.cols(); ++j) B.col(j) << basis[j].tangent, basis[j].covector;
  return B;
}

DiracBasis dirac_basis(const ConstraintCoefficients& c, const ArenaPoint& base) {
  if (!std::isfinite(c.a) || std::abs(c.a) <= 1e-14 * std::max(1.0, inf_norm(c.f))) {
    throw DegeneratePoint("dL/dS vanishes at the base point; the temperature must be positive");
  }
  const Index dim = base.dim();
  const Mat C = dirac_condition_matrix(base.arena, base.n, c);

  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  const double cut = 1e-12 * std::max(1.0, sv[0]) * static_cast<double>(2 * dim);
  const Index rank_c = (sv.array() > cut).count();
  const Mat kernel = svd.matrixV().rightCols(2 * dim - rank_c);

  DiracBasis out;
  out.arena = base.arena;
  out.base = base;
  out.dimension = kernel.cols();
  for (Index j = 0; j < kernel.cols(); ++j) {
    out.basis.emplace_back(base, Vec(kernel.col(j).head(dim)), Vec(kernel.col(j).tail(dim)));
  }
  out.rank = Eigen::ColPivHouseholderQR<Mat>(kernel).rank();
  out.isotropy_defect = isotropy_defect(kernel);
  return out;
}

DiracBasis dirac_basis(Arena arena, const SimpleThermoModel& model, const ArenaPoint& base) {
  if (base.arena != arena) throw BaseMismatch("base point does not lie on arena " + to_string(arena));
  return dirac_basis(constraint_coefficients(model, base), base);
}

double distance_to_span(const DiracBasis& basis, const Vec& tangent, const Vec& covector) {
  Vec x(tangent.size() + covector.size());
  x << tangent, covector;
  const Mat B = basis.matrix();
  const Vec coef = B.colPivHouseholderQr().solve(x);
  return inf_norm(B * coef - x);
}

}  // namespace dirac_thermo
