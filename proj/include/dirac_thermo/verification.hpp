#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dirac_thermo/dynamics.hpp"

namespace dirac_thermo {

// ---------------------------------------------------------------------------
// Cross-formulation agreement

struct FormulationDeviation {
  std::string first;
  std::string second;
  bool available = true;
  double max_deviation = 0.0;    // max over time of |x_first - x_second|_inf on M
  double final_deviation = 0.0;  // same at t_end
  std::string note;
};

struct CompareReport {
  std::vector<FormulationDeviation> rows;
  double worst() const;
};

struct CompareOptions {
  bool include_implicit = false;  // first-order P integrator, reported but slow to converge
};

/// Integrates the Lagrangian, Hamilton-Dirac (N) and Lagrange-Dirac (TstarQ)
/// systems from the same (q, S, v), maps all of them onto M and reports the
/// pairwise deviations. Degenerate models get only the Lagrangian row.
CompareReport cross_formulation_compare(const SimpleThermoModel& model, const Vec& q0, double S0, const Vec& v0,
                                        double t_end, double h, const CompareOptions& opts = {});

// ---------------------------------------------------------------------------
// Discrete action variations

struct VariationField {
  std::function<Vec(double)> dq;
  std::function<Vec(double)> dq_dot;
  std::function<double(double)> dS;  // ignored when projecting
  std::function<Vec(double)> dp;     // Hamilton side only; zero when empty
};

/// Smooth positive bump times a random low-mode modulation, vanishing at t0 and t1.
VariationField random_variation(Index n, double t0, double t1, std::mt19937_64& rng, double amplitude = 1.0,
                                int modes = 3);

struct ActionVariationOptions {
  double epsilon = 1e-6;
  /// Replace dS by the value solving the variational constraint at each node.
  bool project = true;
};

/// (A(eps) - A(0)) / eps for the trapezoid action sum of L(q, qdot, S) along a
/// Lagrangian (M-arena) trajectory, plus the external-force work term. Along a
/// solution and for admissible variations this is O(h + eps).
double action_variation_residual(const SimpleThermoModel& model, const Trajectory& trajectory,
                                 const VariationField& field, const ActionVariationOptions& opts = {});

/// Same for the phase-space action <p, qdot> - H along a Hamilton-Dirac (N) trajectory.
double action_variation_residual_hamilton(const HamiltonianModel& h, const Trajectory& trajectory,
                                          const VariationField& field, const ActionVariationOptions& opts = {});

// ---------------------------------------------------------------------------
// Mechanics reduction

struct MechanicsReductionReport {
  bool preconditions_met = false;
  std::string reason;
  double max_field_deviation = 0.0;  // vector_field_N vs (dH/dp, -dH/dq)
  double max_entropy_rate = 0.0;
  int samples = 0;
};

/// Requires zero friction and dL/dS independent of (q, v); compares the
/// Hamilton-Dirac field against the canonical Hamiltonian field on samples.
MechanicsReductionReport mechanics_reduction_check(const SimpleThermoModel& model, int samples = 100,
                                                   std::uint64_t seed = 7);

// ---------------------------------------------------------------------------
// Dirac-membership battery along a computed solution

struct TheoremCheck {
  std::string name;
  Arena arena = Arena::M;
  bool available = true;
  std::string note;
  double max_solution_residual = 0.0;
  double min_perturbed_residual = 0.0;
  int samples = 0;
};

/// For an M-arena Lagrangian trajectory, checks the five Dirac formulations
/// (P, TstarQ, M, N Lagrange-Dirac, N Hamilton-Dirac) at `samples` nodes, and
/// the same with randomly perturbed rates.
std::vector<TheoremCheck> theorem_battery(const SimpleThermoModel& model, const Trajectory& trajectory,
                                          std::mt19937_64& rng, int samples = 50);

// ---------------------------------------------------------------------------
// Sampled property suites shared by the CLI and the test harness.

struct IsotropySummary {
  Arena arena = Arena::M;
  bool available = true;
  std::string note;
  int points = 0;
  Index expected_dimension = 0;
  bool dimension_ok = true;
  bool rank_ok = true;
  double max_isotropy_defect = 0.0;
};

std::vector<IsotropySummary> isotropy_suite(const SimpleThermoModel& model, std::mt19937_64& rng, int points = 100);

struct LegendreSummary {
  bool available = true;
  std::string note;
  int samples = 0;
  double max_round_trip = 0.0;     // |FL^-1(FL(v)) - v|_inf
  double max_energy_identity = 0.0;  // |E(j_L(x)) - H(x)|
  double max_temperature_identity = 0.0;  // |T - dH/dS|
};

LegendreSummary legendre_suite(const SimpleThermoModel& model, std::mt19937_64& rng, int samples = 100);

using PointSampler = std::function<Vec(std::mt19937_64&)>;

/// Max fd_check deviation of a field over random points drawn by `sampler`.
double max_fd_deviation(const ScalarField& field, const PointSampler& sampler, std::mt19937_64& rng,
                        int points = 100, double h = 1e-5);

struct FieldCheck {
  std::string name;
  double max_deviation = 0.0;
  int points = 0;
};

/// Dual-number vs central-difference check of L on the model box, and of H
/// on the image of the box under the Legendre map when H exists.
std::vector<FieldCheck> gradient_suite(const SimpleThermoModel& model, std::mt19937_64& rng, int points = 100);

}  // namespace dirac_thermo
