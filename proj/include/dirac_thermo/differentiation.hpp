#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "dirac_thermo/types.hpp"

namespace dirac_thermo {

// A callable available at the three scalar types the library evaluates on.
// Build it from one generic lambda; the Dual2 slot may be left empty for
// quantities that only support first derivatives (the Hamiltonian).
// Vector-valued lambdas should spell out `-> Vector<T>` so that no Eigen
// expression referencing locals escapes.
template <template <class> class Sig>
class PolyFunction {
 public:
  PolyFunction() = default;

  template <class F>
    requires(!std::is_same_v<std::decay_t<F>, PolyFunction>)
  PolyFunction(F f)  // NOLINT: generic lambdas convert implicitly
      : f0_(f), f1_(f), f2_(f) {}

  PolyFunction(std::function<Sig<double>> f0, std::function<Sig<Dual1>> f1,
               std::function<Sig<Dual2>> f2 = {})
      : f0_(std::move(f0)), f1_(std::move(f1)), f2_(std::move(f2)) {}

  template <class T>
  const std::function<Sig<T>>& get() const {
    if constexpr (std::is_same_v<T, double>) {
      return f0_;
    } else if constexpr (std::is_same_v<T, Dual1>) {
      return f1_;
    } else {
      static_assert(std::is_same_v<T, Dual2>, "unsupported scalar type");
      return f2_;
    }
  }

  template <class T>
  bool supports() const {
    return static_cast<bool>(get<T>());
  }

  explicit operator bool() const { return static_cast<bool>(f0_); }

 private:
  std::function<Sig<double>> f0_;
  std::function<Sig<Dual1>> f1_;
  std::function<Sig<Dual2>> f2_;
};

template <class T>
using ScalarSig = T(const Vector<T>&);

struct ScalarField {
  std::string name;
  Index arity = 0;
  PolyFunction<ScalarSig> f;
};

struct DerivativeBundle {
  double value = 0.0;
  Vec gradient;
  std::optional<Mat> hessian;
};

// Seed helpers over an arbitrary generic callable. `f` takes Vector<Dual<T>>
// and returns Dual<T> (or Vector<Dual<T>> for the Jacobian).

template <class T, class F>
std::pair<T, Vector<T>> value_and_gradient(F&& f, const Vector<T>& x) {
  using D = Dual<T>;
  const Index n = x.size();
  Vector<D> xd(n);
  for (Index i = 0; i < n; ++i) xd[i] = D(x[i], T(0.0));
  Vector<T> g(n);
  T value(0.0);
  if (n == 0) {
    value = f(xd).val;
  }
  for (Index i = 0; i < n; ++i) {
    xd[i].eps = T(1.0);
    const D r = f(xd);
    xd[i].eps = T(0.0);
    g[i] = r.eps;
    value = r.val;
  }
  return {value, g};
}

template <class T, class F>
Matrix<T> jacobian_of(F&& f, const Vector<T>& x) {
  using D = Dual<T>;
  const Index n = x.size();
  Vector<D> xd(n);
  for (Index i = 0; i < n; ++i) xd[i] = D(x[i], T(0.0));
  Matrix<T> J;
  for (Index i = 0; i < n; ++i) {
    xd[i].eps = T(1.0);
    const Vector<D> r = f(xd);
    xd[i].eps = T(0.0);
    if (i == 0) J.resize(r.size(), n);
    for (Index k = 0; k < r.size(); ++k) J(k, i) = r[k].eps;
  }
  return J;
}

// Full n x n Hessian from nested duals; every entry comes from its own pass,
// so the symmetry of the result is a genuine check and not imposed.
template <class F>
Mat hessian_of(F&& f, const Vec& x) {
  const Index n = x.size();
  Vector<Dual2> xd(n);
  for (Index i = 0; i < n; ++i) xd[i] = Dual2(Dual1(x[i], 0.0), Dual1(0.0, 0.0));
  Mat H(n, n);
  for (Index j = 0; j < n; ++j) {
    xd[j].val.eps = 1.0;
    for (Index k = 0; k < n; ++k) {
      xd[k].eps.val = 1.0;
      H(j, k) = f(xd).eps.eps;
      xd[k].eps.val = 0.0;
    }
    xd[j].val.eps = 0.0;
  }
  return H;
}

double evaluate(const ScalarField& field, const Vec& x);
Vec grad(const ScalarField& field, const Vec& x);
Mat hessian(const ScalarField& field, const Vec& x);
DerivativeBundle derivatives(const ScalarField& field, const Vec& x, bool with_hessian = true);

/// Max relative deviation |ad - fd| / max(|ad|, 1) between dual-number and
/// central-difference derivatives. Covers the Hessian too when the field
/// supports nested duals.
double fd_check(const ScalarField& field, const Vec& x, double h = 1e-5);

double symmetry_defect(const Mat& H);

}  // namespace dirac_thermo
