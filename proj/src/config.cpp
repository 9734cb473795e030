#include "floatsolid/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace floatsolid {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& known) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (known.count(item.key()) == 0) {
      throw ConfigError("unknown key '" + (where.empty() ? "" : where + ".") + item.key() + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + where + "." + key + "' has the wrong type");
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

double gaussian(double x, double center, double width) {
  const double s = (x - center) / width;
  return std::exp(-s * s);
}

}  // namespace

std::string to_string(Scheme scheme) {
  return scheme == Scheme::trapezoidal ? "trapezoidal" : "implicit_euler";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "trapezoidal") return Scheme::trapezoidal;
  if (name == "implicit_euler") return Scheme::implicit_euler;
  throw ConfigError("unknown time scheme '" + name + "'");
}

Grid Config::make_grid() const {
  return build_grid(physical(), grid.L, grid.n_side, grid.sponge_width, grid.sponge_strength);
}

void validate(const Config& c) {
  require(c.params.a > 0.0 && std::isfinite(c.params.a), "params.a must be positive");
  require(c.params.mu > 0.0 && std::isfinite(c.params.mu), "params.mu must be positive");
  require(c.grid.L > c.params.a && std::isfinite(c.grid.L), "grid.L must exceed params.a");
  require(c.grid.n_side >= kMinNodesPerSide,
          "grid.n_side must be at least " + std::to_string(kMinNodesPerSide));
  require(c.grid.sponge_width >= 0.0 && c.grid.sponge_width < c.grid.L - c.params.a,
          "grid.sponge_width must lie in [0, L - a)");
  require(c.grid.sponge_strength >= 0.0, "grid.sponge_strength must be nonnegative");
  require(c.time.dt > 0.0 && std::isfinite(c.time.dt), "time.dt must be positive");
  require(c.time.T_max > 0.0 && std::isfinite(c.time.T_max), "time.T_max must be positive");
  require(c.lqr.tol > 0.0, "lqr.tol must be positive");
  require(c.lqr.alpha0 > 0.0, "lqr.alpha0 must be positive");
  require(c.sweep.theta >= 0.0 && c.sweep.theta < std::numbers::pi / 2,
          "sweep.theta must lie in [0, pi/2)");
  require(c.sweep.radii >= 2, "sweep.radii must be at least 2");
  require(c.sweep.angles >= 1, "sweep.angles must be at least 1");
  const std::set<std::string> presets = {"rest", "heave", "bump", "flow"};
  require(presets.count(c.initial.name) == 1, "initial.name must be rest, heave, bump or flow");
  require(c.initial.width > 0.0, "initial.width must be positive");
  const std::set<std::string> controllers = {"none", "alpha", "optimal"};
  require(controllers.count(c.controller.type) == 1,
          "controller.type must be none, alpha or optimal");
  require(c.controller.alpha >= 0.0, "controller.alpha must be nonnegative");
}

Config config_from_json(const json& j) {
  Config c;
  reject_unknown(j, "", {"params", "grid", "time", "lqr", "sweep", "seed", "initial", "controller"});
  if (j.contains("params")) {
    const json& s = j.at("params");
    reject_unknown(s, "params", {"a", "mu"});
    read(s, "a", c.params.a, "params");
    read(s, "mu", c.params.mu, "params");
  }
  if (j.contains("grid")) {
    const json& s = j.at("grid");
    reject_unknown(s, "grid", {"L", "n_side", "sponge_width", "sponge_strength"});
    read(s, "L", c.grid.L, "grid");
    read(s, "n_side", c.grid.n_side, "grid");
    read(s, "sponge_width", c.grid.sponge_width, "grid");
    read(s, "sponge_strength", c.grid.sponge_strength, "grid");
  }
  if (j.contains("time")) {
    const json& s = j.at("time");
    reject_unknown(s, "time", {"dt", "T_max", "scheme"});
    read(s, "dt", c.time.dt, "time");
    read(s, "T_max", c.time.T_max, "time");
    std::string scheme = to_string(c.time.scheme);
    read(s, "scheme", scheme, "time");
    c.time.scheme = scheme_from_string(scheme);
  }
  if (j.contains("lqr")) {
    const json& s = j.at("lqr");
    reject_unknown(s, "lqr", {"tol", "alpha0", "method"});
    read(s, "tol", c.lqr.tol, "lqr");
    read(s, "alpha0", c.lqr.alpha0, "lqr");
    std::string method = to_string(c.lqr.method);
    read(s, "method", method, "lqr");
    c.lqr.method = care_method_from_string(method);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown(s, "sweep", {"theta", "radii", "angles"});
    read(s, "theta", c.sweep.theta, "sweep");
    read(s, "radii", c.sweep.radii, "sweep");
    read(s, "angles", c.sweep.angles, "sweep");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw ConfigError("field 'seed' must be a nonnegative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("initial")) {
    const json& s = j.at("initial");
    reject_unknown(s, "initial", {"name", "level", "center", "width", "amplitude"});
    read(s, "name", c.initial.name, "initial");
    read(s, "level", c.initial.level, "initial");
    read(s, "center", c.initial.center, "initial");
    read(s, "width", c.initial.width, "initial");
    read(s, "amplitude", c.initial.amplitude, "initial");
  }
  if (j.contains("controller")) {
    const json& s = j.at("controller");
    reject_unknown(s, "controller", {"type", "alpha"});
    read(s, "type", c.controller.type, "controller");
    read(s, "alpha", c.controller.alpha, "controller");
  }
  validate(c);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

nlohmann::ordered_json to_json(const Config& c) {
  nlohmann::ordered_json j;
  j["params"] = {{"a", c.params.a}, {"mu", c.params.mu}};
  j["grid"] = {{"L", c.grid.L},
               {"n_side", c.grid.n_side},
               {"sponge_width", c.grid.sponge_width},
               {"sponge_strength", c.grid.sponge_strength}};
  j["time"] = {{"dt", c.time.dt}, {"T_max", c.time.T_max}, {"scheme", to_string(c.time.scheme)}};
  j["lqr"] = {{"tol", c.lqr.tol}, {"alpha0", c.lqr.alpha0}, {"method", to_string(c.lqr.method)}};
  j["sweep"] = {{"theta", c.sweep.theta}, {"radii", c.sweep.radii}, {"angles", c.sweep.angles}};
  j["seed"] = c.seed;
  j["initial"] = {{"name", c.initial.name},
                  {"level", c.initial.level},
                  {"center", c.initial.center},
                  {"width", c.initial.width},
                  {"amplitude", c.initial.amplitude}};
  j["controller"] = {{"type", c.controller.type}, {"alpha", c.controller.alpha}};
  return j;
}

State make_initial_state(const Grid& grid, const InitialPreset& p) {
  const auto zero = [](double) { return 0.0; };
  if (p.name == "rest") {
    return initial_state(grid, p.level, 0.0, [&](double) { return p.level; }, zero);
  }
  if (p.name == "heave") return initial_state(grid, p.level, 0.0, zero, zero);
  if (p.name == "bump") {
    return initial_state(
        grid, 0.0, 0.0, [&](double x) { return p.amplitude * gaussian(x, p.center, p.width); },
        zero);
  }
  if (p.name == "flow") {
    const auto q0 = [&](double x) { return p.amplitude * gaussian(x, p.center, p.width); };
    const double G0 = -(q0(grid.a()) - q0(-grid.a())) / (2.0 * grid.a());
    return initial_state(grid, 0.0, G0, zero, q0);
  }
  throw ConfigError("unknown initial preset '" + p.name + "'");
}

}  // namespace floatsolid
