// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dirac_thermo/dirac_thermo.hpp"

using namespace dirac_thermo;

namespace {

namespace tol {
constexpr double isotropy = 1e-10;
constexpr double isotropy_seconds = 5.0;
constexpr double energy_drift = 1e-8;
constexpr double energy_halving_ratio = 12.0;
constexpr double energy_seconds = 10.0;
constexpr double entropy_step = -1e-12;
constexpr double entropy_identity = 1e-12;
constexpr double battery_solution = 1e-6;
constexpr double battery_perturbed = 1e-3;
constexpr double compare = 1e-6;
constexpr double round_trip = 1e-10;
constexpr double energy_identity = 1e-10;
constexpr double temperature_identity = 1e-9;
constexpr double ideal_gas = 1e-9;
constexpr double chemistry = 1e-8;
constexpr double action = 1e-3;
constexpr double action_violating = 1e-1;
constexpr double action_min_ratio = 1.5;  // linear shrink under halving gives about 2
constexpr double mechanics = 1e-12;
constexpr double gradient = 1e-6;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Shipped {
  SimpleThermoModel piston = build_piston(PistonParams{});
  SimpleThermoModel membrane = build_membrane(MembraneParams{});
  IsomerizationToy toy{};
  SimpleThermoModel reactions = build_reactions(toy.params());

  const Vec piston_q0 = Vec::Constant(1, 1.0);
  const Vec piston_v0 = Vec::Zero(1);
  const Vec membrane_q0 = Vec::Zero(3);
  const Vec membrane_v0 = (Vec(3) << 1.0, -0.5, 0.2).finished();
};

Trajectory lagrangian_run(const SimpleThermoModel& m, const Vec& q0, double S0, const Vec& v0, double t_end,
                          double h) {
  return integrate_explicit(lagrangian_system(m), lagrangian_initial_state(m, q0, S0, v0), t_end, h);
}

// ---------------------------------------------------------------------------

Outcome c1_isotropy(const Shipped& s) {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  int arenas = 0, skipped = 0;
  for (const SimpleThermoModel* m : {&s.piston, &s.membrane, &s.reactions}) {
    for (const IsotropySummary& r : isotropy_suite(*m, rng, 100)) {
      if (!r.available) {
        ++skipped;
        continue;
      }
      ++arenas;
      o.pass = o.pass && r.points >= 100 && r.dimension_ok && r.rank_ok;
      worst = std::max(worst, r.max_isotropy_defect);
    }
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && worst <= tol::isotropy && secs < tol::isotropy_seconds;
  o.detail = fmt("%d model-arena pairs x 100 points, max defect %.2e (tol %.0e), %.2f s (limit %.0f s), %d pairs "
                 "skipped for the degenerate model",
                 arenas, worst, tol::isotropy, secs, tol::isotropy_seconds, skipped);
  return o;
}

Outcome c2_energy(const Shipped& s) {
  Outcome o;
  const auto t0 = Clock::now();
  const Trajectory a = lagrangian_run(s.piston, s.piston_q0, 0.0, s.piston_v0, 1.0, 1e-4);
  const double secs = seconds_since(t0);
  const Trajectory b = lagrangian_run(s.piston, s.piston_q0, 0.0, s.piston_v0, 1.0, 2e-4);
  const double d1 = monitor(a).energy_drift, d2 = monitor(b).energy_drift;
  const double ratio = d2 / d1;
  o.pass = a.complete && b.complete && d1 <= tol::energy_drift && ratio >= tol::energy_halving_ratio &&
           secs < tol::energy_seconds;
  o.detail = fmt("piston lambda=1, RK4 h=1e-4 drift %.2e (tol %.0e); h=2e-4 -> 1e-4 ratio %.1f (min %.0f); %.2f s",
                 d1, tol::energy_drift, ratio, tol::energy_halving_ratio, secs);
  return o;
}

Outcome c3_second_law(const Shipped& s) {
  Outcome o;
  const double dp = monitor(lagrangian_run(s.piston, s.piston_q0, 0.0, s.piston_v0, 1.0, 1e-4)).min_entropy_step;
  const double dm =
      monitor(lagrangian_run(s.membrane, s.membrane_q0, 0.0, s.membrane_v0, 1.0, 1e-4)).min_entropy_step;

  const Trajectory chem = lagrangian_run(s.reactions, Vec::Zero(1), 0.0, Vec::Zero(1), 5.0, 1e-3);
  double worst_identity = 0.0, min_production = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < chem.size(); ++k) {
    const PointM m = PointM::from_coords(1, chem.states[k]);
    const double T = -lagrangian_partials<double>(s.reactions, m.q, m.v, m.S).LS;
    const double psidot = chem.rates[k][0], Sdot = chem.rates[k][1];
    const double production = s.toy.lambda * psidot * psidot;
    worst_identity = std::max(worst_identity, std::abs(T * Sdot - production));
    min_production = std::min(min_production, T * Sdot);
  }
  o.pass = chem.complete && dp >= tol::entropy_step && dm >= tol::entropy_step &&
           worst_identity <= tol::entropy_identity && min_production >= -tol::entropy_identity;
  o.detail = fmt("min dS piston %.2e, membrane %.2e (floor %.0e); toy |T Sdot - lambda psidot^2| %.2e, "
                 "min T Sdot %.2e (tol %.0e)",
                 dp, dm, tol::entropy_step, worst_identity, min_production, tol::entropy_identity);
  return o;
}

Outcome c4_battery(const Shipped& s) {
  Outcome o;
  std::mt19937_64 rng(404);
  double worst = 0.0, weakest = std::numeric_limits<double>::infinity();
  int checks = 0, skipped = 0;
  auto run = [&](const SimpleThermoModel& m, const Trajectory& t) {
    for (const TheoremCheck& c : theorem_battery(m, t, rng, 50)) {
      if (!c.available) {
        ++skipped;
        continue;
      }
      ++checks;
      worst = std::max(worst, c.max_solution_residual);
      weakest = std::min(weakest, c.min_perturbed_residual);
    }
  };
  run(s.piston, lagrangian_run(s.piston, s.piston_q0, 0.0, s.piston_v0, 1.0, 1e-4));
  run(s.membrane, lagrangian_run(s.membrane, s.membrane_q0, 0.0, s.membrane_v0, 1.0, 1e-4));
  run(s.reactions, lagrangian_run(s.reactions, Vec::Zero(1), 0.0, Vec::Zero(1), 5.0, 1e-3));
  o.pass = checks > 0 && worst <= tol::battery_solution && weakest >= tol::battery_perturbed;
  o.detail = fmt("%d formulation checks x 50 nodes: max solution residual %.2e (tol %.0e), min perturbed residual "
                 "%.2e (floor %.0e); %d skipped for the degenerate model",
                 checks, worst, tol::battery_solution, weakest, tol::battery_perturbed, skipped);
  return o;
}

Outcome c5_compare(const Shipped& s) {
  Outcome o;
  double dp = -1.0, dm = -1.0;
  for (const auto& r : cross_formulation_compare(s.piston, s.piston_q0, 0.0, s.piston_v0, 1.0, 1e-4).rows) {
    if (r.first == "hamilton-dirac-N" && r.second == "lagrangian-M") dp = r.max_deviation;
  }
  for (const auto& r : cross_formulation_compare(s.membrane, s.membrane_q0, 0.0, s.membrane_v0, 1.0, 1e-4).rows) {
    if (r.first == "hamilton-dirac-N" && r.second == "lagrangian-M") dm = r.max_deviation;
  }
  o.pass = dp >= 0.0 && dm >= 0.0 && dp <= tol::compare && dm <= tol::compare;
  o.detail = fmt("Hamilton-Dirac N vs Lagrangian on M, t=1, h=1e-4: piston %.2e, membrane %.2e (tol %.0e)", dp, dm,
                 tol::compare);
  return o;
}

Outcome c6_legendre(const Shipped& s) {
  Outcome o;
  std::mt19937_64 rng(606);
  double rt = 0.0, en = 0.0, te = 0.0;
  int models = 0;
  for (const SimpleThermoModel* m : {&s.piston, &s.membrane}) {
    const LegendreSummary r = legendre_suite(*m, rng, 100);
    o.pass = o.pass && r.available && r.samples >= 100;
    rt = std::max(rt, r.max_round_trip);
    en = std::max(en, r.max_energy_identity);
    te = std::max(te, r.max_temperature_identity);
    ++models;
  }
  o.pass = o.pass && rt <= tol::round_trip && en <= tol::energy_identity && te <= tol::temperature_identity;
  o.detail = fmt("%d hyperregular models x 100 samples: round trip %.2e (tol %.0e), E o j_L - H %.2e (tol %.0e), "
                 "T - dH/dS %.2e (tol %.0e)",
                 models, rt, tol::round_trip, en, tol::energy_identity, te, tol::temperature_identity);
  return o;
}

Outcome c7_ideal_gas() {
  Outcome o;
  const PistonParams P{};
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> ux(P.x_lo, P.x_hi), uS(P.S_lo, P.S_hi);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = ux(rng), S = uS(rng);
    const double pV = piston_pressure(P, x, S) * P.A * x;
    const double NRT = P.N0 * P.R * piston_temperature(P, x, S);
    worst = std::max(worst, std::abs(pV - NRT) / std::abs(NRT));
  }
  o.pass = worst <= tol::ideal_gas;
  o.detail = fmt("100 samples, max relative |pV - N0 R T| %.2e (tol %.0e)", worst, tol::ideal_gas);
  return o;
}

Outcome c8_chemistry(const Shipped& s) {
  Outcome o;
  const Trajectory t = lagrangian_run(s.reactions, Vec::Zero(1), 0.0, Vec::Zero(1), 5.0, 1e-3);
  double worst = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    worst = std::max(worst, std::abs(t.states[k][0] - s.toy.psi(t.times[k], 0.0)));
  }
  bool rejected = false;
  ReactionParams bad = s.toy.params();
  bad.nu << -1.0, 2.0;
  try {
    (void)build_reactions(bad);
  } catch (const LavoisierViolation&) {
    rejected = true;
  }
  o.pass = t.complete && worst <= tol::chemistry && rejected;
  o.detail = fmt("psi(t) vs closed form on [0,5], h=1e-3: %.2e (tol %.0e); nu=(-1,+2) %s", worst, tol::chemistry,
                 rejected ? "rejected with LavoisierViolation" : "NOT rejected");
  return o;
}

Outcome c9_degenerate(const Shipped& s) {
  Outcome o;
  std::string message = "no error";
  bool gated = false;
  try {
    HamiltonianModel h(s.reactions);
  } catch (const DegenerateLagrangian& e) {
    gated = true;
    message = e.what();
  }
  const Trajectory t = lagrangian_run(s.reactions, Vec::Zero(1), 0.0, Vec::Zero(1), 5.0, 1e-3);
  o.pass = gated && t.complete && t.size() > 1;
  o.detail = fmt("HamiltonianModel(reactions) -> %s (\"%s\"); regime-(b) Lagrangian run %s with %zu nodes",
                 gated ? "DegenerateLagrangian" : "no gate", message.c_str(), t.complete ? "completed" : "FAILED",
                 t.size());
  return o;
}

Outcome c10_action(const Shipped& s) {
  Outcome o;
  std::mt19937_64 rng(1010);
  // Amplitude 0.1: a tenth of the initial piston position.
  const VariationField field = random_variation(1, 0.0, 1.0, rng, 0.1);
  auto residual = [&](double h, double eps, bool project) {
    const Trajectory t = lagrangian_run(s.piston, s.piston_q0, 0.0, s.piston_v0, 1.0, h);
    return action_variation_residual(s.piston, t, field, {eps, project});
  };
  const double r1 = residual(1e-4, 1e-6, true);
  const double r2 = residual(5e-5, 5e-7, true);
  const double bad = residual(1e-4, 1e-6, false);
  const double ratio = r1 / r2;
  o.pass = r1 <= tol::action && ratio >= tol::action_min_ratio && bad >= tol::action_violating;
  o.detail = fmt("admissible: %.2e at h=1e-4, eps=1e-6 (tol %.0e); %.2e at h=5e-5, eps=5e-7 (ratio %.2f, min %.1f); "
                 "violating: %.2e (floor %.0e)",
                 r1, tol::action, r2, ratio, tol::action_min_ratio, bad, tol::action_violating);
  return o;
}

Outcome c11_mechanics() {
  Outcome o;
  const MechanicsReductionReport r = mechanics_reduction_check(build_oscillator(), 100, 1111);
  o.pass = r.preconditions_met && r.samples >= 100 && r.max_field_deviation <= tol::mechanics &&
           r.max_entropy_rate == 0.0;
  o.detail = fmt("oscillator, %d samples: field deviation %.2e (tol %.0e), max |Sdot| %.1e (must be 0)%s", r.samples,
                 r.max_field_deviation, tol::mechanics, r.max_entropy_rate,
                 r.preconditions_met ? "" : (" preconditions: " + r.reason).c_str());
  return o;
}

Outcome c12_gradients(const Shipped& s) {
  Outcome o;
  std::mt19937_64 rng(1212);
  std::vector<FieldCheck> checks;
  for (const SimpleThermoModel* m : {&s.piston, &s.membrane, &s.reactions}) {
    for (FieldCheck& c : gradient_suite(*m, rng, 100)) checks.push_back(c);
  }
  const PistonParams pp{};
  checks.push_back({"perfect_gas.U",
                    max_fd_deviation(perfect_gas_field(pp),
                                     [&](std::mt19937_64& g) {
                                       std::uniform_real_distribution<double> uS(pp.S_lo, pp.S_hi), uN(0.5, 2.0),
                                           uV(pp.x_lo, pp.x_hi);
                                       return Vec((Vec(3) << uS(g), uN(g), uV(g)).finished());
                                     },
                                     rng, 100),
                    100});
  const MembraneParams mp{};
  auto membrane_sampler = [](double lo, double hi) {
    return [lo, hi](std::mt19937_64& g) {
      std::uniform_real_distribution<double> uS(-1.0, 1.0), u(lo, hi);
      return Vec((Vec(4) << uS(g), u(g), u(g), u(g)).finished());
    };
  };
  checks.push_back({"membrane.Phi", max_fd_deviation(membrane_potential_field(mp), membrane_sampler(-2, 2), rng, 100),
                    100});
  checks.push_back({"membrane.U", max_fd_deviation(membrane_energy_field(mp), membrane_sampler(-2, 4), rng, 100), 100});
  checks.push_back({"reactions.U",
                    max_fd_deviation({"reactions.U", 3, s.toy.params().U},
                                     [](std::mt19937_64& g) {
                                       std::uniform_real_distribution<double> u(-1.0, 2.0);
                                       return Vec((Vec(3) << u(g), u(g), u(g)).finished());
                                     },
                                     rng, 100),
                    100});
  for (FieldCheck& c : gradient_suite(build_oscillator(), rng, 100)) checks.push_back(c);

  double worst = 0.0;
  std::string worst_name;
  for (const FieldCheck& c : checks) {
    if (c.max_deviation >= worst) {
      worst = c.max_deviation;
      worst_name = c.name;
    }
    o.pass = o.pass && c.points >= 100;
  }
  o.pass = o.pass && worst <= tol::gradient;
  o.detail = fmt("%zu fields x 100 points, max |AD - FD| %.2e on %s (tol %.0e)", checks.size(), worst,
                 worst_name.c_str(), tol::gradient);
  return o;
}

}  // namespace

int main() {
  const Shipped s;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"dirac-structure dimension and isotropy", [&] { return c1_isotropy(s); }},
      {"energy conservation", [&] { return c2_energy(s); }},
      {"second law", [&] { return c3_second_law(s); }},
      {"formulation equivalence battery", [&] { return c4_battery(s); }},
      {"cross-formulation agreement", [&] { return c5_compare(s); }},
      {"Legendre round trip and identities", [&] { return c6_legendre(s); }},
      {"perfect-gas consistency", [] { return c7_ideal_gas(); }},
      {"chemical toy oracle", [&] { return c8_chemistry(s); }},
      {"degenerate-Lagrangian gate", [&] { return c9_degenerate(s); }},
      {"action-variation residual", [&] { return c10_action(s); }},
      {"mechanics reduction", [] { return c11_mechanics(); }},
      {"differentiation", [&] { return c12_gradients(s); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s [%2zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
