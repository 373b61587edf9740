#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "dirac_thermo/dual.hpp"

namespace dirac_thermo {

using Index = Eigen::Index;

template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Vector<double>;
using Mat = Matrix<double>;

template <class T>
Vec values_of(const Vector<T>& x) {
  Vec out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = value_of(x[i]);
  return out;
}

template <class T>
Vector<T> lift(const Vec& x) {
  Vector<T> out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = T(x[i]);
  return out;
}

template <class T>
T dot(const Vector<T>& a, const Vector<T>& b) {
  T s(0.0);
  for (Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(const Vec& x) { return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>(); }

// Error hierarchy. Every library failure derives from Error so callers can
// catch broadly; the subclasses map onto the documented failure modes.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class BaseMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownArena : public Error {
 public:
  using Error::Error;
};

/// dL/dS vanished at a point: the temperature assumption dL/dS < 0 is violated.
class DegeneratePoint : public Error {
 public:
  using Error::Error;
};

/// The Lagrangian is not (hyper)regular in the velocities, so no Hamiltonian exists.
class DegenerateLagrangian : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class TemperatureViolation : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

class LavoisierViolation : public InvalidParameters {
 public:
  using InvalidParameters::InvalidParameters;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class InconsistentInitialCondition : public Error {
 public:
  using Error::Error;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

inline void require_size(Index actual, Index expected, const char* what) {
  if (actual != expected) {
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(expected) +
                            ", got " + std::to_string(actual));
  }
}

}  // namespace dirac_thermo
