// SPDX-License-Identifier: Apache-2.0
//
// Outage regions when the transmitters know only the channel statistics.
//
// With h ~ CN(0, Q) and a fixed beamformer w, |h^H w|^2 is exponential with
// mean w^H Q w. For link i with signal mean s and interference mean t,
//
//   Pr{ S >= g (I + sigma^2) } = exp(-g sigma^2 / s) * s / (s + g t),
//
// where g = 2^r - 1, obtained by averaging the exponential tail of S over I.

#ifndef MISO_STAT_CSI_HPP
#define MISO_STAT_CSI_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "miso/regions.hpp"

namespace miso {

struct ExponentialLinkModel {
  double s_bar = 0.0;     ///< mean signal power w_i^H Q_ii w_i
  double t_bar = 0.0;     ///< mean interference power w_j^H Q_ji w_j
  double sigma_sq = 1.0;  ///< noise variance at the receiver
};

ExponentialLinkModel effective_means(const ChannelStatistics& stats,
                                     const Beamformer& w1, const Beamformer& w2,
                                     Link link);

/// Pr{R_i >= r} for fixed rank-1 beamformers under Rayleigh fading.
double link_success_closed_form(const ExponentialLinkModel& model, double r);

/// Largest r with link_success_closed_form(model, r) >= target, by bisection
/// (bracket below 1e-12 bits). nullopt when target > 1.
std::optional<double> max_rate_for_success(const ExponentialLinkModel& model,
                                           double target);

struct StatMembership {
  bool member = false;
  double pi1 = 0.0;  ///< Pr{R1 >= r1}
  double pi2 = 0.0;  ///< Pr{R2 >= r2}
  std::vector<double> margins;
};

/// Links fade independently, so the joint success probability is pi1 * pi2.
StatMembership stat_member(const ChannelStatistics& stats, const Beamformer& w1,
                           const Beamformer& w2, RatePoint point,
                           const OutageSpec& spec);

struct StatMcEstimate {
  bool member = false;
  double pi1 = 0.0;
  double pi2 = 0.0;
  double joint = 0.0;  ///< Pr{R1 >= r1, R2 >= r2}
  std::uint64_t n = 0;

  double standard_error(double p) const noexcept;
};

/// Monte-Carlo estimate of the general-rank success probabilities over the
/// sample stream, using rate_cov.
StatMcEstimate stat_member_mc(const ChannelStatistics& stats,
                              const TransmitCovariance& psi1,
                              const TransmitCovariance& psi2, RatePoint point,
                              const OutageSpec& spec, const SampleSource& source,
                              Exec exec = {});

struct SearchConfig {
  std::size_t pairs = 1000;
  std::uint64_t seed = 1;
};

/// Uniform on the complex unit sphere of dimension n, addressed by
/// (seed, index).
Beamformer random_unit_beamformer(Eigen::Index n, std::uint64_t seed,
                                  std::uint64_t index);

struct BeamformerPair {
  Beamformer w1, w2;
  ExponentialLinkModel link1, link2;
};

/// Union over randomly drawn full-power beamformer pairs of the rate points
/// meeting the outage specification.
class StatisticalRegion {
 public:
  StatisticalRegion(const ChannelStatistics& stats, const OutageSpec& spec,
                    const SearchConfig& search, Exec exec = {});

  const std::vector<BeamformerPair>& pairs() const noexcept { return pairs_; }
  const OutageSpec& spec() const noexcept { return spec_; }

  bool member(RatePoint point) const;
  /// Largest r2 reachable at r1 by any pair; nullopt when none serves r1.
  std::optional<double> max_r2(double r1) const;
  std::optional<double> pair_max_r2(const BeamformerPair& pair, double r1) const;

  /// Non-dominated frontier of all per-pair points, plus the per-column
  /// maxima on the grid.
  RegionBoundary boundary(const GridConfig& grid) const;

 private:
  StatMembership evaluate(const BeamformerPair& pair, RatePoint point) const;
  std::optional<double> indexed_max_r2(std::size_t i, double r1) const;

  OutageSpec spec_;
  std::vector<BeamformerPair> pairs_;
  std::vector<std::pair<double, double>> corners_;  // individual mode
};

RegionBoundary search_stat_boundary(const ChannelStatistics& stats,
                                    const OutageSpec& spec,
                                    const SearchConfig& search,
                                    const GridConfig& grid, Exec exec = {});

}  // namespace miso

#endif  // MISO_STAT_CSI_HPP
