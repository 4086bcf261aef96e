// SPDX-License-Identifier: Apache-2.0
//
// Fading model of the two-user MISO interference channel.
//
// h_ij is the conjugated channel from TX i to RX j. RX 1 hears its own
// signal through h11 and interference through h21; RX 2 hears h22 and h12.

#ifndef MISO_CHANNEL_HPP
#define MISO_CHANNEL_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "miso/exec.hpp"

namespace miso {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigenTol = 1e-10;

enum class Link { one = 1, two = 2 };

inline Link other(Link link) noexcept {
  return link == Link::one ? Link::two : Link::one;
}

/// Receiver noise variances, both strictly positive.
struct Noise {
  double sigma1_sq = 1.0;
  double sigma2_sq = 1.0;

  double of(Link link) const noexcept {
    return link == Link::one ? sigma1_sq : sigma2_sq;
  }
  void validate() const;
};

/// One draw of the four channel vectors.
struct ChannelRealization {
  CVector h11, h12, h21, h22;

  ChannelRealization() = default;
  /// Throws Error on length mismatch, empty vectors, or non-finite entries.
  ChannelRealization(CVector h11_, CVector h12_, CVector h21_, CVector h22_);

  Eigen::Index antennas() const noexcept { return h11.size(); }

  /// Own channel of TX `link` (h_ii).
  const CVector& own(Link link) const noexcept {
    return link == Link::one ? h11 : h22;
  }
  /// Channel along which TX `link` interferes with the other receiver (h_ij).
  const CVector& cross(Link link) const noexcept {
    return link == Link::one ? h12 : h21;
  }

  /// Relabels links 1 <-> 2.
  ChannelRealization swapped() const;
};

/// Channel covariances Q_ij and noise variances defining the fading law.
struct ChannelStatistics {
  Eigen::Index n = 0;
  CMatrix q11, q12, q21, q22;
  Noise noise;
};

/// Returns `stats` unchanged when every covariance is Hermitian within
/// kHermitianTol, has no eigenvalue below -kEigenTol, is n x n, and the noise
/// variances are positive. Otherwise throws Error naming the offender.
ChannelStatistics validate_statistics(ChannelStatistics stats);

/// Checks a single matrix; `name` is used in the error message.
void validate_covariance(const CMatrix& q, const std::string& name);

/// Lower-triangular L with L * L^H == Q. Zero pivots (rank-deficient Q) zero
/// their column; a pivot below -tol throws Error (indefinite input).
CMatrix factor_covariance(const CMatrix& q);

/// Deterministic source of channel realizations: either Gaussian draws from
/// statistics (sample k depends only on (seed, k)) or an explicit list.
class SampleSource {
 public:
  static SampleSource from_statistics(ChannelStatistics stats,
                                      std::uint64_t seed, std::size_t count);
  static SampleSource from_list(std::vector<ChannelRealization> list,
                                Noise noise);

  std::size_t size() const noexcept { return count_; }
  const Noise& noise() const noexcept { return noise_; }
  Eigen::Index antennas() const noexcept { return antennas_; }
  bool is_statistical() const noexcept { return model_ != nullptr; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Realization k. In statistics mode k may exceed size().
  ChannelRealization at(std::size_t k) const;

  /// Same law and seed with a different sample count.
  SampleSource with_count(std::size_t count) const;
  /// Same law with a different seed (statistics mode only).
  SampleSource with_seed(std::uint64_t seed) const;

 private:
  struct Model {
    ChannelStatistics stats;
    CMatrix l11, l12, l21, l22;
  };

  SampleSource() = default;

  std::shared_ptr<const Model> model_;
  std::shared_ptr<const std::vector<ChannelRealization>> list_;
  Noise noise_;
  std::uint64_t seed_ = 0;
  std::size_t count_ = 0;
  Eigen::Index antennas_ = 0;
};

/// Materializes the source in index order.
std::vector<ChannelRealization> sample_batch(const SampleSource& source,
                                             Exec exec = {});

}  // namespace miso

#endif  // MISO_CHANNEL_HPP
