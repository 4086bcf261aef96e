// SPDX-License-Identifier: Apache-2.0
//
// Computations behind the miso_outage subcommands. Everything here is pure
// except run_region/write_* which own the file writes.

#ifndef MISO_RUNNER_HPP
#define MISO_RUNNER_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "miso/run_config.hpp"

namespace miso {

inline constexpr const char* kToolVersion = "1.0.0";

/// Boundary CSV header; column order is fixed.
inline constexpr const char* kBoundaryHeader =
    "r1,r2,p_a,p_b,p_c1,p_c2,p_d,margin1,margin2,margin3";

/// One row per non-dominated boundary point, values with 10 significant
/// digits, empty cells for fields the scenario does not define.
std::string boundary_csv(const RegionBoundary& boundary);
/// One row per grid column: r1 and the traced r2 (empty when no r2 works).
std::string columns_csv(const RegionBoundary& boundary);

/// "%.10g".
std::string format_number(double v);

struct RegionRun {
  GridConfig grid;
  std::vector<RegionBoundary> boundaries;
};

/// The scenarios a region run traces: the configured one, plus the
/// fixed-choice (and, for a single epsilon, common) boundaries for
/// individual-inst.
std::vector<Scenario> region_scenarios(const RunConfig& config);

/// Grid caps from the config, else from the SU quantiles of the stream.
GridConfig resolve_grid(const RunConfig& config, const Ensemble* ensemble);

RegionRun compute_region(const RunConfig& config, Exec exec = {});

/// Manifest: config echo, resolved grid, seed, sample count, outputs and
/// warnings. Carries nothing that depends on the machine or the clock.
nlohmann::json region_manifest(const RunConfig& config, const RegionRun& run);

/// Writes <prefix><scenario>.csv, <prefix><scenario>_columns.csv,
/// <prefix>manifest.json and <prefix>timing.json; returns the paths written.
std::vector<std::filesystem::path> run_region(const RunConfig& config,
                                              const std::filesystem::path& out,
                                              Exec exec = {});

nlohmann::json run_point(const RunConfig& config, RatePoint point,
                         Exec exec = {});

nlohmann::json run_frontier(const RunConfig& config, std::size_t sample);
/// q,p samples of one frontier on [0, q_mrt].
std::string frontier_csv(const PowerFrontier& frontier, int points = 201);

nlohmann::json run_simulate(const RunConfig& config, RatePoint point,
                            double bias, Exec exec = {});

/// Writes `text` to `path`, throwing Error on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace miso

#endif  // MISO_RUNNER_HPP
