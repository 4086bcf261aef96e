// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops of the Monte-Carlo engine.
//
// Each kernel comes as a serial reference and an OpenMP version. The two are
// required to agree bit for bit: per-sample work depends only on the sample
// index, and reductions are over integers.

#ifndef MISO_KERNELS_HPP
#define MISO_KERNELS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "miso/cases.hpp"
#include "miso/channel.hpp"

namespace miso::kernels {

std::vector<ChannelRealization> draw_serial(const SampleSource& source);
std::vector<ChannelRealization> draw_parallel(const SampleSource& source,
                                              int threads);

std::vector<SampleGeometry> geometry_serial(const SampleSource& source);
std::vector<SampleGeometry> geometry_parallel(const SampleSource& source,
                                              int threads);

CaseCounts classify_serial(std::span<const SampleGeometry> samples,
                           RatePoint point, const Noise& noise);
CaseCounts classify_parallel(std::span<const SampleGeometry> samples,
                             RatePoint point, const Noise& noise, int threads);

/// out[k] = max_rate2(samples[k], r1), or -1 when r1 > R1^SU of sample k.
void column_serial(std::span<const SampleGeometry> samples, double r1,
                   const Noise& noise, std::span<double> out);
void column_parallel(std::span<const SampleGeometry> samples, double r1,
                     const Noise& noise, std::span<double> out, int threads);

/// Runs the case policy on every realization of `source`; case D is settled
/// by a coin with Pr{link 1} = bias drawn from the coin stream at the sample
/// index.
PolicyCounts policy_serial(const SampleSource& source, RatePoint point,
                           double bias, std::uint64_t coin_seed);
PolicyCounts policy_parallel(const SampleSource& source, RatePoint point,
                             double bias, std::uint64_t coin_seed, int threads);

struct StatCounts {
  std::uint64_t n = 0;
  std::uint64_t success1 = 0;
  std::uint64_t success2 = 0;
  std::uint64_t joint = 0;

  StatCounts& operator+=(const StatCounts& o) noexcept {
    n += o.n;
    success1 += o.success1;
    success2 += o.success2;
    joint += o.joint;
    return *this;
  }
  bool operator==(const StatCounts&) const = default;
};

/// Counts R_i(h, Psi1, Psi2) >= r_i over the source for fixed covariances.
StatCounts stat_success_serial(const SampleSource& source, const CMatrix& psi1,
                               const CMatrix& psi2, RatePoint point);
StatCounts stat_success_parallel(const SampleSource& source,
                                 const CMatrix& psi1, const CMatrix& psi2,
                                 RatePoint point, int threads);

}  // namespace miso::kernels

#endif  // MISO_KERNELS_HPP
