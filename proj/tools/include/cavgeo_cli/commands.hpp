#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cavgeo_cli/config.hpp"
#include "cavgeo_cli/table.hpp"

namespace cavgeo::cli {

struct CommandOptions {
  std::optional<int> n_qubits;     ///< ghz --n
  std::optional<std::string> mode; ///< ghz/shor --mode
  int jobs = 1;                    ///< sweep workers
};

const std::vector<std::string>& command_names();

Result run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts = {});

Result cmd_estimate(const RunConfig& cfg);
Result cmd_gate(const RunConfig& cfg);
Result cmd_ghz(const RunConfig& cfg, const CommandOptions& opts);
Result cmd_shor(const RunConfig& cfg, const CommandOptions& opts);
Result cmd_phase_audit(const RunConfig& cfg);
Result cmd_rwa_check(const RunConfig& cfg);
Result cmd_sweep(const RunConfig& cfg, const CommandOptions& opts);

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of the index-th scenario stream derived from a base seed.
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

}  // namespace cavgeo::cli
