#include <cmath>
#include <cstdlib>
#include <fstream>

#include "dirac_thermo/cli.hpp"

namespace dirac_thermo::cli {

using nlohmann::json;

namespace {

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

Vec vector(const json& j, const std::string& what) {
  if (j.is_number()) return Vec::Constant(1, j.get<double>());
  if (!j.is_array()) throw ConfigError("'" + what + "' must be a number or an array of numbers");
  Vec out(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("'" + what + "' must contain only numbers");
    out[static_cast<Index>(i)] = j[i].get<double>();
  }
  return out;
}

Vec vector(const json& j, const char* key, const Vec& fallback) {
  return j.contains(key) ? vector(j.at(key), key) : fallback;
}

Mat matrix(const json& j, const std::string& what) {
  if (j.is_number()) return Mat::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ConfigError("'" + what + "' must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 1;
  Mat out(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = vector(j[r], what);
    if (static_cast<std::size_t>(row.size()) != cols) throw ConfigError("'" + what + "' rows differ in length");
    out.row(static_cast<Index>(r)) = row.transpose();
  }
  return out;
}

void range(const json& j, const char* key, double& lo, double& hi) {
  if (!j.contains(key)) return;
  const Vec r = vector(j.at(key), key);
  if (r.size() != 2 || !(r[0] < r[1])) throw ConfigError(std::string("'") + key + "' must be [lo, hi] with lo < hi");
  lo = r[0];
  hi = r[1];
}

Eigen::Vector3d vector3(const json& j, const char* key, const Eigen::Vector3d& fallback) {
  if (!j.contains(key)) return fallback;
  const Vec v = vector(j.at(key), key);
  if (v.size() != 3) throw ConfigError(std::string("'") + key + "' must have three entries");
  return v;
}

PistonParams piston_params(const json& j) {
  PistonParams P;
  P.m = number(j, "m", P.m);
  P.A = number(j, "A", P.A);
  P.N0 = number(j, "N0", P.N0);
  P.c = number(j, "c", P.c);
  P.R = number(j, "R", P.R);
  P.U0 = number(j, "U0", P.U0);
  P.S0 = number(j, "S0", P.S0);
  P.V0 = number(j, "V0", P.V0);
  if (j.contains("lambda")) {
    const json& l = j.at("lambda");
    if (l.is_number()) {
      P.lambda = {l.get<double>(), 0.0, 0.0};
    } else if (l.is_object()) {
      P.lambda = {number(l, "c0", 0.0), number(l, "cx", 0.0), number(l, "cS", 0.0)};
    } else {
      throw ConfigError("'lambda' must be a number or {c0, cx, cS}");
    }
  }
  range(j, "x_range", P.x_lo, P.x_hi);
  range(j, "v_range", P.v_lo, P.v_hi);
  range(j, "S_range", P.S_lo, P.S_hi);
  return P;
}

MembraneParams membrane_params(const json& j) {
  MembraneParams P;
  P.T0 = number(j, "T0", P.T0);
  P.a = vector3(j, "a", P.a);
  P.Nbar = vector3(j, "Nbar", P.Nbar);
  P.L1 = number(j, "L1", P.L1);
  P.L2 = number(j, "L2", P.L2);
  range(j, "w_range", P.w_lo, P.w_hi);
  range(j, "mu_range", P.mu_lo, P.mu_hi);
  range(j, "S_range", P.S_lo, P.S_hi);
  return P;
}

// U = T0 S + sum_I k_I (N_I - N_I*)^2 / 2; the default network is the A <=> B toy.
ReactionParams reaction_params(const json& j) {
  const IsomerizationToy toy;
  ReactionParams P = toy.params();
  if (j.contains("nu")) P.nu = matrix(j.at("nu"), "nu");
  const Index R = P.nu.rows(), r = P.nu.cols();
  P.masses = vector(j, "masses", R == 2 ? P.masses : Vec::Ones(R));
  P.N_init = vector(j, "N_init", R == 2 ? P.N_init : Vec::Zero(R));
  P.lambda = j.contains("lambda") ? matrix(j.at("lambda"), "lambda") : Mat(Mat::Identity(r, r) * toy.lambda);
  const double T0 = number(j, "T0", toy.T0);
  const Vec star = vector(j, "N_star", R == 2 ? Vec(toy.N_star) : Vec::Zero(R));
  const Vec k = vector(j, "stiffness", Vec::Ones(R));
  require_size(star.size(), R, "N_star");
  require_size(k.size(), R, "stiffness");
  P.U = [T0, star, k](const auto& z) {
    using T = typename std::decay_t<decltype(z)>::Scalar;
    T U = T(T0) * z[0];
    for (Index I = 0; I < star.size(); ++I) {
      const T d = z[I + 1] - T(star[I]);
      U += T(0.5 * k[I]) * d * d;
    }
    return U;
  };
  range(j, "psi_range", P.psi_lo, P.psi_hi);
  range(j, "S_range", P.S_lo, P.S_hi);
  return P;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.kind != "piston" && c.kind != "membrane" && c.kind != "reactions") {
    throw ConfigError("model.kind must be piston, membrane or reactions (got '" + c.kind + "')");
  }
  if (c.formulation != "lagrangian" && c.formulation != "hamilton-dirac-N" && c.formulation != "implicit-P") {
    throw ConfigError("formulation must be hamilton-dirac-N, lagrangian or implicit-P (got '" + c.formulation + "')");
  }
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) throw ConfigError("t_end must be positive");
  if (!(c.h > 0.0) || !std::isfinite(c.h)) throw ConfigError("step h must be positive");
  if (c.q0.size() == 0) throw ConfigError("initial.q is required");
  if (!std::isfinite(c.S0)) throw ConfigError("initial.S must be finite");
  if (c.v0 && c.p0) throw ConfigError("give initial.v or initial.p, not both");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    const json& m = j.at("model");
    c.kind = m.at("kind").get<std::string>();
    if (m.contains("params")) c.params = m.at("params");
    if (!c.params.is_object()) throw ConfigError("model.params must be an object");
    c.formulation = j.value("formulation", c.formulation);
    c.t_end = number(j, "t_end", c.t_end);
    c.h = number(j, "h", c.h);
    const json& init = j.at("initial");
    c.q0 = vector(init.at("q"), "initial.q");
    c.S0 = number(init, "S", 0.0);
    if (init.contains("v")) c.v0 = vector(init.at("v"), "initial.v");
    if (init.contains("p")) c.p0 = vector(init.at("p"), "initial.p");
    if (j.contains("output")) {
      const json& o = j.at("output");
      c.out_dir = o.value("dir", c.out_dir);
      c.full_resolution = o.value("full_resolution", c.full_resolution);
    }
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      Tolerances& tol = c.tol;
      tol.membership = number(t, "membership", tol.membership);
      tol.energy_drift = number(t, "energy_drift", tol.energy_drift);
      tol.entropy_step = number(t, "entropy_step", tol.entropy_step);
      tol.compare = number(t, "compare", tol.compare);
      tol.isotropy = number(t, "isotropy", tol.isotropy);
      tol.gradient = number(t, "gradient", tol.gradient);
      tol.round_trip = number(t, "round_trip", tol.round_trip);
      tol.energy_identity = number(t, "energy_identity", tol.energy_identity);
      tol.temperature_identity = number(t, "temperature_identity", tol.temperature_identity);
      tol.battery_solution = number(t, "battery_solution", tol.battery_solution);
      tol.battery_perturbed = number(t, "battery_perturbed", tol.battery_perturbed);
      tol.action = number(t, "action", tol.action);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return parse_config(j);
}

SimpleThermoModel build_model(const RunConfig& c, bool validate) {
  SimpleThermoModel m = [&] {
    if (c.kind == "piston") return build_piston(piston_params(c.params), validate);
    if (c.kind == "membrane") return build_membrane(membrane_params(c.params), validate);
    return build_reactions(reaction_params(c.params));
  }();
  if (c.q0.size() != m.n()) throw ConfigError("initial.q has the wrong dimension for model " + c.kind);
  if (c.v0 && c.v0->size() != m.n()) throw ConfigError("initial.v has the wrong dimension for model " + c.kind);
  if (c.p0 && c.p0->size() != m.n()) throw ConfigError("initial.p has the wrong dimension for model " + c.kind);
  return m;
}

Vec initial_velocity(const RunConfig& c, const SimpleThermoModel& model) {
  if (c.v0) return *c.v0;
  if (c.p0) return inverse_partial_legendre(model, c.q0, *c.p0, c.S0);
  return Vec::Zero(model.n());
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("DIRAC_THERMO_SEED");
  if (s == nullptr || *s == '\0') return 12345;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0') throw ConfigError(std::string("DIRAC_THERMO_SEED is not an integer: ") + s);
  return v;
}

}  // namespace dirac_thermo::cli
