// SPDX-License-Identifier: Apache-2.0
//
// Run-configuration file: a JSON document with a strict schema. Complex
// numbers are [re, im] pairs; vectors are arrays of pairs; matrices are
// arrays of rows.

#ifndef MISO_RUN_CONFIG_HPP
#define MISO_RUN_CONFIG_HPP

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "miso/regions.hpp"
#include "miso/stat_csi.hpp"

namespace miso {

/// Schema violation; what() starts with the JSON pointer of the offending
/// field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct RunConfig {
  Scenario scenario = Scenario::individual_inst;
  Eigen::Index n = 0;
  /// Gaussian fading law; absent when explicit realizations are given.
  std::optional<ChannelStatistics> statistics;
  /// Explicit sample stream, repeated cyclically up to mc_samples if set.
  std::vector<ChannelRealization> realizations;
  Noise noise;
  OutageSpec outage;
  bool single_epsilon = true;  ///< written back as "epsilon" rather than a pair
  std::optional<std::size_t> mc_samples;
  std::uint64_t seed = 0;
  int grid_columns = 50;
  std::optional<double> r1_cap;
  std::optional<double> r2_cap;
  std::optional<SearchConfig> search;
  std::optional<std::uint64_t> coin_seed;
  std::optional<RatePoint> point;               ///< for `point` and `simulate`
  std::optional<double> bias;                   ///< for `simulate`
  std::optional<std::size_t> frontier_sample;   ///< for `frontier`
  std::string output_prefix;

  /// Number of samples in the stream this config describes.
  std::size_t sample_count() const;
};

RunConfig parse_config(std::string_view text);
nlohmann::json to_json(const RunConfig& config);

/// The sample stream the config describes.
SampleSource make_source(const RunConfig& config);

nlohmann::json complex_matrix_to_json(const CMatrix& m);
nlohmann::json complex_vector_to_json(const CVector& v);

}  // namespace miso

#endif  // MISO_RUN_CONFIG_HPP
