#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> gives second
// derivatives; all model evaluators are written once, generically over the
// scalar type, and instantiated for double, Dual1 and Dual2.

#include <cmath>
#include <type_traits>

#include <Eigen/Core>

namespace dirac_thermo {

template <class T>
struct Dual {
  T val{};
  T eps{};

  constexpr Dual() = default;
  constexpr Dual(double v) : val(v), eps(0.0) {}  // NOLINT: constants promote implicitly
  template <class U>
    requires(std::is_same_v<U, T> && !std::is_same_v<T, double>)
  constexpr Dual(const U& v) : val(v), eps(0.0) {}  // NOLINT
  constexpr Dual(const T& v, const T& e) : val(v), eps(e) {}

  friend constexpr Dual operator+(const Dual& a) { return a; }
  friend constexpr Dual operator-(const Dual& a) { return {-a.val, -a.eps}; }

  friend constexpr Dual operator+(const Dual& a, const Dual& b) {
    return {a.val + b.val, a.eps + b.eps};
  }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) {
    return {a.val - b.val, a.eps - b.eps};
  }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    return {a.val * b.val, a.val * b.eps + a.eps * b.val};
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1.0) / b.val;
    const T q = a.val * inv;
    return {q, (a.eps - q * b.eps) * inv};
  }

  constexpr Dual& operator+=(const Dual& b) { return *this = *this + b; }
  constexpr Dual& operator-=(const Dual& b) { return *this = *this - b; }
  constexpr Dual& operator*=(const Dual& b) { return *this = *this * b; }
  constexpr Dual& operator/=(const Dual& b) { return *this = *this / b; }

  friend constexpr bool operator<(const Dual& a, const Dual& b) { return a.val < b.val; }
  friend constexpr bool operator>(const Dual& a, const Dual& b) { return a.val > b.val; }
  friend constexpr bool operator<=(const Dual& a, const Dual& b) { return a.val <= b.val; }
  friend constexpr bool operator>=(const Dual& a, const Dual& b) { return a.val >= b.val; }
  friend constexpr bool operator==(const Dual& a, const Dual& b) { return a.val == b.val; }
  friend constexpr bool operator!=(const Dual& a, const Dual& b) { return a.val != b.val; }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

inline constexpr double value_of(double x) { return x; }
template <class T>
constexpr double value_of(const Dual<T>& x) {
  return value_of(x.val);
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.val);
  return {e, e * x.eps};
}

template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.val), x.eps / x.val};
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  const T r = sqrt(x.val);
  return {r, x.eps / (T(2.0) * r)};
}

template <class T>
Dual<T> pow(const Dual<T>& x, double k) {
  using std::pow;
  const T head = pow(x.val, k - 1.0);
  return {head * x.val, T(k) * head * x.eps};
}

template <class T>
Dual<T> pow(const Dual<T>& x, const Dual<T>& y) {
  return exp(y * log(x));
}

template <class T>
Dual<T> pow(double a, const Dual<T>& y) {
  return exp(y * std::log(a));
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.val), cos(x.val) * x.eps};
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.val), -sin(x.val) * x.eps};
}

template <class T>
Dual<T> tanh(const Dual<T>& x) {
  using std::tanh;
  const T t = tanh(x.val);
  return {t, (T(1.0) - t * t) * x.eps};
}

template <class T>
Dual<T> abs(const Dual<T>& x) {
  return x.val < T(0.0) ? -x : x;
}

template <class T>
bool isfinite(const Dual<T>& x) {
  using std::isfinite;
  return isfinite(x.val) && isfinite(x.eps);
}

}  // namespace dirac_thermo

namespace Eigen {

template <class T>
struct NumTraits<dirac_thermo::Dual<T>> : NumTraits<double> {
  using Real = dirac_thermo::Dual<T>;
  using NonInteger = Real;
  using Nested = Real;
  using Literal = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost
  };
  static inline Real epsilon() { return Real(NumTraits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(NumTraits<double>::dummy_precision()); }
  static inline Real highest() { return Real(NumTraits<double>::highest()); }
  static inline Real lowest() { return Real(NumTraits<double>::lowest()); }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

}  // namespace Eigen
