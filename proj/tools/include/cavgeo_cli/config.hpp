#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cavgeo/model.hpp"
#include "cavgeo/propagate.hpp"

namespace cavgeo::cli {

using nlohmann::json;

/// Parsed run configuration. Blocks: units, device, drive, numerics,
/// scenario, context. Energies are converted to rad/ns on load.
struct RunConfig {
  json raw;  ///< merged document after env overrides (schema-checked)
  std::string energy_unit = "ueV";
  DeviceParams device;
  DriveParams drive;
  EvolveOptions numerics;
  int fock_cutoff = 20;
  std::uint64_t seed = 0;
  int steps_per_loop = 1024;
  json scenario = json::object();
  json context = json::object();
};

using EnvList = std::vector<std::pair<std::string, std::string>>;

/// Reads a JSON document; throws ConfigError on I/O or syntax errors.
json load_document(const std::string& path);

/// Applies CAVGEO_<BLOCK>__<KEY>[__<KEY>...]=value overrides. Values are
/// parsed as JSON when possible and kept as strings otherwise.
void apply_env_overrides(json& doc, const EnvList& env);

/// Sets a dotted key path (e.g. "device.coupling") to `value`.
void set_path(json& doc, const std::string& dotted, const json& value);

/// Validates the document against the strict schema and builds the model
/// parameters. Throws ConfigError on unknown keys or invalid values.
RunConfig build_config(const json& doc);

/// Energy in the configured unit -> rad/ns.
double to_internal_energy(double value, const std::string& unit);

/// Rejects scenario keys outside `allowed` for the named subcommand.
void require_scenario_keys(const json& scenario, const std::string& command, std::initializer_list<const char*> allowed);

}  // namespace cavgeo::cli
