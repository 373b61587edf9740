#include "dirac_thermo/constraints.hpp"

namespace dirac_thermo {

double variational_constraint_residual(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S,
                                       const Vec& dq, double dS) {
  require_size(dq.size(), model.n(), "variation dq");
  const double LS = lagrangian_partials<double>(model, q, v, S).LS;
  const Vec F = model.friction<double>(q, v, S);
  return LS * dS - F.dot(dq);
}

double phenomenological_constraint_residual(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S,
                                            double Sdot) {
  return variational_constraint_residual(model, q, v, S, v, Sdot);
}

Vec annihilator_residual(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S, const Vec& alpha,
                         double tau) {
  require_size(alpha.size(), model.n(), "covector alpha");
  const double LS = lagrangian_partials<double>(model, q, v, S).LS;
  const Vec F = model.friction<double>(q, v, S);
  return alpha * LS + tau * F;
}

Eigen::RowVectorXd constraint_row(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S) {
  const Index n = model.n();
  Eigen::RowVectorXd row(n + 1);
  row.head(n) = -model.friction<double>(q, v, S).transpose();
  row[n] = lagrangian_partials<double>(model, q, v, S).LS;
  return row;
}

}  // namespace dirac_thermo
