#include "dirac_thermo/differentiation.hpp"

#include <algorithm>
#include <cmath>

namespace dirac_thermo {

namespace {

void check_arity(const ScalarField& field, const Vec& x) {
  require_size(x.size(), field.arity, field.name.empty() ? "scalar field" : field.name.c_str());
  if (!field.f) throw InvalidParameters("scalar field '" + field.name + "' has no evaluator");
}

void check_finite(const ScalarField& field, bool ok) {
  if (!ok) throw DomainError("non-finite derivative of '" + field.name + "' (outside its domain?)");
}

}  // namespace

double evaluate(const ScalarField& field, const Vec& x) {
  check_arity(field, x);
  const double v = field.f.get<double>()(x);
  check_finite(field, std::isfinite(v));
  return v;
}

Vec grad(const ScalarField& field, const Vec& x) {
  check_arity(field, x);
  const auto& f1 = field.f.get<Dual1>();
  if (!f1) throw InvalidParameters("scalar field '" + field.name + "' has no first-order evaluator");
  auto [value, g] = value_and_gradient<double>(f1, x);
  check_finite(field, std::isfinite(value) && g.allFinite());
  return g;
}

Mat hessian(const ScalarField& field, const Vec& x) {
  check_arity(field, x);
  const auto& f2 = field.f.get<Dual2>();
  if (!f2) throw InvalidParameters("scalar field '" + field.name + "' has no second-order evaluator");
  Mat H = hessian_of(f2, x);
  check_finite(field, H.allFinite());
  return H;
}

DerivativeBundle derivatives(const ScalarField& field, const Vec& x, bool with_hessian) {
  DerivativeBundle out;
  out.value = evaluate(field, x);
  out.gradient = grad(field, x);
  if (with_hessian && field.f.supports<Dual2>()) out.hessian = hessian(field, x);
  return out;
}

double fd_check(const ScalarField& field, const Vec& x, double h) {
  if (!(h > 0.0)) throw InvalidParameters("fd_check: step must be positive");
  const auto& f0 = field.f.get<double>();
  const Vec g = grad(field, x);
  const bool second = field.f.supports<Dual2>();
  const Mat H = second ? hessian(field, x) : Mat();

  double worst = 0.0;
  auto rel = [](double ad, double fd) { return std::abs(ad - fd) / std::max(std::abs(ad), 1.0); };

  Vec xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    worst = std::max(worst, rel(g[i], (f0(xp) - f0(xm)) / (2.0 * h)));
    if (second) {
      const Vec dg = (grad(field, xp) - grad(field, xm)) / (2.0 * h);
      for (Index j = 0; j < x.size(); ++j) worst = std::max(worst, rel(H(j, i), dg[j]));
    }
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return worst;
}

double symmetry_defect(const Mat& H) {
  if (H.size() == 0) return 0.0;
  return (H - H.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace dirac_thermo
