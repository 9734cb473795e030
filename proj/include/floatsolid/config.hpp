#pragma once

// Run configuration (one JSON document) and the named initial-data presets.

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "floatsolid/discretization.hpp"
#include "floatsolid/dynamics.hpp"
#include "floatsolid/lqr.hpp"

namespace floatsolid {

/// Initial data built to satisfy the compatibility condition by construction.
///   rest:  H = h = level, q = 0
///   heave: H = level, h = 0, q = 0
///   bump:  h = amplitude exp(-((x - center)/width)^2), H = 0, q = 0
///   flow:  q = amplitude exp(-((x - center)/width)^2), G0 taken from q(+-a)
struct InitialPreset {
  std::string name = "bump";
  double level = 0.1;
  double center = 4.0;
  double width = 1.0;
  double amplitude = 0.1;
};

/// none: u = 0; alpha: u = -alpha Ḣ; optimal: u = -B^T P z.
struct ControllerSpec {
  std::string type = "none";
  double alpha = 1.0;
};

struct Config {
  struct Params {
    double a = 1.0;
    double mu = 1.0;
  } params;
  struct GridSpec {
    double L = 20.0;
    int n_side = 100;
    double sponge_width = 5.0;
    double sponge_strength = 1.0;
  } grid;
  struct Time {
    double dt = 0.01;
    double T_max = 500.0;
    Scheme scheme = Scheme::trapezoidal;
  } time;
  struct Lqr {
    double tol = 1e-10;
    double alpha0 = 1.0;
    CareMethod method = CareMethod::newton_kleinman;
  } lqr;
  struct Sweep {
    double theta = 0.7853981633974483;  // pi/4
    int radii = 40;
    int angles = 64;
  } sweep;
  std::uint64_t seed = 20240611;
  InitialPreset initial;
  ControllerSpec controller;

  PhysicalParams physical() const { return PhysicalParams(params.a, params.mu); }
  Grid make_grid() const;
};

/// Throws ConfigError naming the offending field.
void validate(const Config& config);

/// Missing keys keep their defaults; unknown keys are rejected. Validates.
Config config_from_json(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const Config& config);

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// Builds the preset on the grid. Throws ConfigError for an unknown name.
State make_initial_state(const Grid& grid, const InitialPreset& preset);

}  // namespace floatsolid
