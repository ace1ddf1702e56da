#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hamel/models.hpp"
#include "hamel/reconstruction.hpp"

namespace hamel {

using Json = nlohmann::json;

/// A model built from a config document: the system plus, when the
/// model carries kinematic constraints, their connection.
struct LoadedModel {
  MechanicalSystem system;
  std::optional<LocalConnection> connection;
  std::string name;
};

Json load_json_file(const std::string& path);

/// Builds a named preset with parameters or a generic system from
/// tabulated (constant + polynomial) L, K, S entries. Schema errors
/// throw ConfigError carrying the offending field path.
LoadedModel load_model(const Json& config);

/// Constant-block snapshot of a system (evaluated at r = 0) as a
/// generic model document; exact for the built-in presets, whose
/// blocks are constant.
Json serialize_model(const MechanicalSystem& system,
                     const LocalConnection* connection = nullptr);

/// Full run description for the simulate/phase subcommands.
struct RunConfig {
  LoadedModel model;
  Formulation formulation = Formulation::EulerPoincare;
  BundleState initial;
  double t_end = 1.0;  // s
  double dt = 1e-3;    // s
  int cycles = 1;      // phase runs
  std::optional<ShapePath> path;
  VecX momentum;  // body momentum Pi0; empty means zero
};

RunConfig parse_run_config(const Json& config);

/// Closed shape path from a "path" section: "harmonic" (truncated
/// Fourier series per coordinate) or "square" (axis-aligned loop in a
/// 2-d shape space).
ShapePath parse_path(const Json& path_section, int delta_bar);

}  // namespace hamel
