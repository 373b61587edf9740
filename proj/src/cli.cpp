#include "dirac_thermo/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

namespace dirac_thermo::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxRows = 10000;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Trajectory integrate(const RunConfig& c, const SimpleThermoModel& model, const std::string& formulation) {
  const Vec v0 = initial_velocity(c, model);
  if (formulation == "hamilton-dirac-N") {
    const HamiltonianModel h(model);
    const Vec p0 = c.p0 ? *c.p0 : partial_legendre(model, c.q0, v0, c.S0);
    Vec y(2 * model.n() + 1);
    y << c.q0, c.S0, p0;
    return integrate_explicit(hamilton_dirac_system(h), y, c.t_end, c.h);
  }
  if (formulation == "implicit-P") {
    return integrate_implicit_P(model, consistent_point_P(model, c.q0, c.S0, v0), c.t_end, c.h);
  }
  return integrate_explicit(lagrangian_system(model), lagrangian_initial_state(model, c.q0, c.S0, v0), c.t_end, c.h);
}

std::vector<std::size_t> output_rows(std::size_t size, bool full) {
  std::vector<std::size_t> rows;
  if (size == 0) return rows;
  const std::size_t stride = (full || size <= kMaxRows) ? 1 : (size - 1 + kMaxRows - 3) / (kMaxRows - 2);
  for (std::size_t k = 0; k < size; k += stride) rows.push_back(k);
  if (rows.back() != size - 1) rows.push_back(size - 1);
  return rows;
}

void write_csv(const std::filesystem::path& path, const Trajectory& t, const SimpleThermoModel& model, bool full) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw Error("cannot write " + path.string());
  const Index n = model.n();
  std::fputs("t", f);
  for (Index i = 0; i < n; ++i) std::fprintf(f, ",q%ld", static_cast<long>(i));
  std::fputs(",S", f);
  for (Index i = 0; i < n; ++i) std::fprintf(f, ",v%ld", static_cast<long>(i));
  for (Index i = 0; i < n; ++i) std::fprintf(f, ",p%ld", static_cast<long>(i));
  std::fputs(",E,Sdot,constraint_residual,dirac_residual\n", f);
  const std::vector<Vec> xm = states_on_M(t, model);
  for (std::size_t k : output_rows(t.size(), full)) {
    std::fprintf(f, "%.17g", t.times[k]);
    for (Index i = 0; i < xm[k].size(); ++i) std::fprintf(f, ",%.17g", xm[k][i]);
    const DiagnosticsRecord& d = t.diagnostics[k];
    std::fprintf(f, ",%.17g,%.17g,%.17g,%.17g\n", d.energy, d.entropy_rate, d.constraint_residual, d.dirac_residual);
  }
  std::fclose(f);
}

void write_diagnostics(const std::filesystem::path& path, const RunConfig& c, const Trajectory& t) {
  const DiagnosticsReport r = monitor(t);
  json j;
  j["model"] = c.kind;
  j["formulation"] = c.formulation;
  j["h"] = c.h;
  j["t_end"] = c.t_end;
  j["steps"] = t.size() == 0 ? 0 : t.size() - 1;
  j["complete"] = t.complete;
  if (!t.complete) j["failure"] = t.failure;
  j["energy_drift"] = r.energy_drift;
  j["min_entropy_step"] = r.min_entropy_step;
  j["max_constraint_residual"] = r.max_constraint_residual;
  j["max_dirac_residual"] = r.max_dirac_residual;
  std::ofstream(path) << j.dump(2) << '\n';
}

// Shared error mapping for every verb.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IntegrationFailure& e) {
    err << "integration failed: " << e.what() << '\n';
    return kIntegrationError;
  } catch (const Error& e) {
    err << "model error: " << e.what() << '\n';
    return kModelError;
  }
}

struct Report {
  std::ostream& out;
  int failures = 0;

  void line(bool pass, const std::string& name, const std::string& detail) {
    if (!pass) ++failures;
    out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  }
  void skip(const std::string& name, const std::string& why) { out << "SKIP " << name << ": " << why << '\n'; }
};

}  // namespace

int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SimpleThermoModel model = build_model(c);
    const Trajectory t = integrate(c, model, c.formulation);
    const std::filesystem::path dir(c.out_dir);
    std::filesystem::create_directories(dir);
    write_csv(dir / "trajectory.csv", t, model, c.full_resolution);
    write_diagnostics(dir / "diagnostics.json", c, t);
    const DiagnosticsReport r = monitor(t);
    out << c.kind << " / " << c.formulation << ": " << (t.size() ? t.size() - 1 : 0) << " steps, energy drift "
        << fmt("%.3e", r.energy_drift) << ", min entropy step " << fmt("%.3e", r.min_entropy_step) << '\n'
        << "wrote " << (dir / "trajectory.csv").string() << " and " << (dir / "diagnostics.json").string() << '\n';
    if (!t.complete) {
      err << "integration failed at t = " << (t.times.empty() ? 0.0 : t.times.back()) << ": " << t.failure << '\n';
      return static_cast<int>(kIntegrationError);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_check(const RunConfig& c, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Report rep{out};
    try {
      (void)build_model(c, true);
      rep.line(true, "parameters", "model builds with all parameter checks");
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      rep.line(false, "parameters", e.what());
    }
    const SimpleThermoModel model = build_model(c, false);
    const Vec v0 = initial_velocity(c, model);
    const Tolerances& tol = c.tol;
    std::mt19937_64 rng(seed);

    // Invariants along the Lagrangian RK4 solution.
    const Trajectory t = integrate(c, model, "lagrangian");
    if (!t.complete) throw IntegrationFailure(t.failure);
    const DiagnosticsReport d = monitor(t);
    rep.line(d.min_entropy_step >= -tol.entropy_step, "entropy",
             fmt("min per-step dS %.3e (floor %.1e)", d.min_entropy_step, -tol.entropy_step));
    rep.line(d.energy_drift <= tol.energy_drift, "energy",
             fmt("relative drift %.3e (tol %.1e)", d.energy_drift, tol.energy_drift));
    rep.line(d.max_dirac_residual <= tol.battery_solution, "dirac-residual",
             fmt("max along run %.3e (tol %.1e)", d.max_dirac_residual, tol.battery_solution));

    for (const IsotropySummary& s : isotropy_suite(model, rng, 100)) {
      const std::string name = "isotropy-" + to_string(s.arena);
      if (!s.available) {
        rep.skip(name, s.note);
        continue;
      }
      rep.line(s.dimension_ok && s.rank_ok && s.max_isotropy_defect <= tol.isotropy, name,
               fmt("%d points, dimension %ld %s, defect %.3e (tol %.1e)", s.points,
                   static_cast<long>(s.expected_dimension), s.dimension_ok && s.rank_ok ? "ok" : "WRONG",
                   s.max_isotropy_defect, tol.isotropy));
    }

    for (const FieldCheck& g : gradient_suite(model, rng, 100)) {
      rep.line(g.max_deviation <= tol.gradient, "gradient-" + g.name,
               fmt("%d points, max |AD - FD| %.3e (tol %.1e)", g.points, g.max_deviation, tol.gradient));
    }

    const LegendreSummary l = legendre_suite(model, rng, 100);
    if (l.available) {
      rep.line(l.max_round_trip <= tol.round_trip && l.max_energy_identity <= tol.energy_identity &&
                   l.max_temperature_identity <= tol.temperature_identity,
               "legendre",
               fmt("round trip %.3e, E o j_L - H %.3e, T - dH/dS %.3e", l.max_round_trip, l.max_energy_identity,
                   l.max_temperature_identity));
    } else {
      rep.skip("legendre", l.note);
    }

    for (const FormulationDeviation& r : cross_formulation_compare(model, c.q0, c.S0, v0, c.t_end, c.h).rows) {
      const std::string name = "compare-" + r.first + (r.second == "-" ? "" : "-vs-" + r.second);
      if (!r.available || r.second == "-") {
        rep.skip(name, r.note);
        continue;
      }
      rep.line(r.max_deviation <= tol.compare, name, fmt("max deviation %.3e (tol %.1e)", r.max_deviation, tol.compare));
    }

    for (const TheoremCheck& b : theorem_battery(model, t, rng, 50)) {
      const std::string name = "dirac-" + b.name;
      if (!b.available) {
        rep.skip(name, b.note);
        continue;
      }
      rep.line(b.max_solution_residual <= tol.battery_solution && b.min_perturbed_residual >= tol.battery_perturbed,
               name,
               fmt("solution %.3e (tol %.1e), perturbed %.3e (floor %.1e)", b.max_solution_residual,
                   tol.battery_solution, b.min_perturbed_residual, tol.battery_perturbed));
    }

    const double t0 = t.times.front(), t1 = t.times.back();
    const VariationField field = random_variation(model.n(), t0, t1, rng, 0.1);
    const double av = action_variation_residual(model, t, field);
    rep.line(av <= tol.action, "action-variation", fmt("residual %.3e (tol %.1e)", av, tol.action));

    const MechanicsReductionReport mr = mechanics_reduction_check(model, 100, seed);
    if (mr.preconditions_met) {
      rep.line(mr.max_field_deviation <= 1e-12 && mr.max_entropy_rate == 0.0, "mechanics-reduction",
               fmt("field deviation %.3e, max |Sdot| %.1e", mr.max_field_deviation, mr.max_entropy_rate));
    } else {
      rep.skip("mechanics-reduction", mr.reason);
    }

    out << (rep.failures == 0 ? "all checks passed" : fmt("%d check(s) failed", rep.failures)) << '\n';
    return static_cast<int>(rep.failures == 0 ? kOk : kCheckFailed);
  });
}

int cmd_compare(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SimpleThermoModel model = build_model(c);
    CompareOptions opts;
    opts.include_implicit = c.formulation == "implicit-P";
    const CompareReport rep =
        cross_formulation_compare(model, c.q0, c.S0, initial_velocity(c, model), c.t_end, c.h, opts);
    out << fmt("%-24s %-24s %14s %14s  %s\n", "first", "second", "max_dev", "final_dev", "note");
    bool ok = true;
    for (const FormulationDeviation& r : rep.rows) {
      if (!r.available || r.second == "-") {
        out << fmt("%-24s %-24s %14s %14s  %s\n", r.first.c_str(), r.second.c_str(), "-", "-", r.note.c_str());
        continue;
      }
      const bool gating = r.first != "implicit-P" && r.second != "-";
      if (gating && r.max_deviation > c.tol.compare) ok = false;
      out << fmt("%-24s %-24s %14.6e %14.6e  %s\n", r.first.c_str(), r.second.c_str(), r.max_deviation,
                 r.final_deviation, r.note.c_str());
    }
    return static_cast<int>(ok ? kOk : kCheckFailed);
  });
}

int cmd_isotropy(const RunConfig& c, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SimpleThermoModel model = build_model(c);
    std::mt19937_64 rng(seed);
    out << fmt("%-6s %6s %9s %10s %14s  %s\n", "arena", "points", "expected", "dim/rank", "max_defect", "note");
    bool ok = true;
    for (const IsotropySummary& s : isotropy_suite(model, rng, 100)) {
      if (!s.available) {
        out << fmt("%-6s %6s %9ld %10s %14s  %s\n", to_string(s.arena).c_str(), "-",
                   static_cast<long>(s.expected_dimension), "-", "-", s.note.c_str());
        continue;
      }
      const bool good = s.dimension_ok && s.rank_ok && s.max_isotropy_defect <= c.tol.isotropy;
      ok = ok && good;
      out << fmt("%-6s %6d %9ld %10s %14.6e  %s\n", to_string(s.arena).c_str(), s.points,
                 static_cast<long>(s.expected_dimension), s.dimension_ok && s.rank_ok ? "ok" : "WRONG",
                 s.max_isotropy_defect, good ? "" : "FAIL");
    }
    return static_cast<int>(ok ? kOk : kCheckFailed);
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirac-structure simulations of simple thermodynamic systems", "dirac_thermo"};
  app.require_subcommand(1);
  // "-h" would collide with the step-size flag.
  app.set_help_flag("--help", "print this help");

  struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<double> h;
    std::optional<double> t_end;
    std::optional<std::string> formulation;
    bool full_resolution = false;
  } flags;

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"run", "integrate and write trajectory.csv and diagnostics.json"},
      {"check", "run every invariant suite; nonzero exit on any failure"},
      {"compare", "pairwise deviations between formulations"},
      {"isotropy", "Dirac-structure dimension and isotropy on sampled points"},
  };
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->set_help_flag("--help", "print this help");
    sub->add_option("--config", flags.config, "JSON model configuration")->required();
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--h", flags.h, "step size [s]");
    sub->add_option("--t-end", flags.t_end, "final time [s]");
    sub->add_option("--formulation", flags.formulation, "hamilton-dirac-N | lagrangian | implicit-P");
    sub->add_flag("--full-resolution", flags.full_resolution, "write every step to the CSV");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }

  RunConfig c;
  std::uint64_t seed = 0;
  try {
    c = load_config(flags.config);
    if (flags.out) c.out_dir = *flags.out;
    if (flags.h) c.h = *flags.h;
    if (flags.t_end) c.t_end = *flags.t_end;
    if (flags.formulation) c.formulation = *flags.formulation;
    if (flags.full_resolution) c.full_resolution = true;
    validate(c);
    seed = seed_from_env();
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  if (verb == "run") return cmd_run(c, out, err);
  if (verb == "check") return cmd_check(c, seed, out, err);
  if (verb == "compare") return cmd_compare(c, out, err);
  return cmd_isotropy(c, seed, out, err);
}

}  // namespace dirac_thermo::cli
