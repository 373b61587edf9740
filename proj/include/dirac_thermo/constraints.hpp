#pragma once

#include "dirac_thermo/model.hpp"

namespace dirac_thermo {

// Thermodynamic-type constraints. With a = dL/dS and f = F^fr at (q, v, S):
//   variational      a * dS   - <f, dq>
//   phenomenological a * Sdot - <f, v>     (the same function with dq = v, dS = Sdot)
//   annihilator      alpha * a + tau * f   (zero iff (alpha, tau) kills every admissible variation)

double variational_constraint_residual(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S,
                                       const Vec& dq, double dS);

double phenomenological_constraint_residual(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S,
                                            double Sdot);

Vec annihilator_residual(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S, const Vec& alpha,
                         double tau);

/// The single row [-F^fr | dL/dS] spanning the annihilator of the admissible variations.
Eigen::RowVectorXd constraint_row(const SimpleThermoModel& model, const Vec& q, const Vec& v, double S);

}  // namespace dirac_thermo
