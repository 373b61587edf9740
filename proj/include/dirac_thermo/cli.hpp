#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac_thermo/dirac_thermo.hpp"

namespace dirac_thermo::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kModelError = 3,
  kIntegrationError = 4,
};

struct ConfigError : Error {
  using Error::Error;
};

struct Tolerances {
  double membership = kMembershipTolerance;
  double energy_drift = 1e-8;
  double entropy_step = 1e-12;  // allowed per-step entropy decrease
  double compare = 1e-6;
  double isotropy = 1e-10;
  double gradient = 1e-6;
  double round_trip = 1e-10;
  double energy_identity = 1e-10;
  double temperature_identity = 1e-9;
  double battery_solution = 1e-6;
  double battery_perturbed = 1e-3;
  double action = 1e-3;
};

struct RunConfig {
  std::string kind;  // piston | membrane | reactions
  nlohmann::json params = nlohmann::json::object();
  std::string formulation = "lagrangian";  // hamilton-dirac-N | lagrangian | implicit-P
  double t_end = 1.0;
  double h = 1e-4;
  Vec q0;
  double S0 = 0.0;
  std::optional<Vec> v0;
  std::optional<Vec> p0;
  std::string out_dir = "dirac_thermo_out";
  bool full_resolution = false;
  Tolerances tol;
};

/// Throws ConfigError on malformed input or violated invariants (t_end > 0, h > 0).
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& c);

/// Model described by the config. `validate = false` skips the parameter-sign
/// checks so broken fixtures can still be examined by `check`.
SimpleThermoModel build_model(const RunConfig& c, bool validate = true);

/// Initial velocity, recovering it from p0 by the inverse Legendre map when needed.
Vec initial_velocity(const RunConfig& c, const SimpleThermoModel& model);

std::uint64_t seed_from_env();

int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& c, std::uint64_t seed, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_isotropy(const RunConfig& c, std::uint64_t seed, std::ostream& out, std::ostream& err);

/// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirac_thermo::cli
