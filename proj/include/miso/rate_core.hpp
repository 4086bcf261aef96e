// SPDX-License-Identifier: Apache-2.0
//
// Rates, single-user quantities, MRT/ZF beamformers, the per-transmitter
// signal/interference power frontier and the instantaneous feasibility
// oracle for (r1, r2) in R(h).

#ifndef MISO_RATE_CORE_HPP
#define MISO_RATE_CORE_HPP

#include <optional>

#include "miso/channel.hpp"

namespace miso {

inline constexpr double kNormTol = 1e-12;
/// Feasibility slack of the oracle, absolute, in power units.
inline constexpr double kPowerSlack = 1e-9;
inline constexpr int kGoldenIterations = 80;

/// Rank-1 transmit strategy; the zero vector switches the TX off.
class Beamformer {
 public:
  Beamformer() = default;
  /// Throws Error when ||w||^2 > 1 + kNormTol or an entry is non-finite.
  explicit Beamformer(CVector w);

  static Beamformer zero(Eigen::Index n) { return Beamformer(CVector::Zero(n)); }

  const CVector& vec() const noexcept { return w_; }
  double power() const noexcept { return w_.squaredNorm(); }
  Eigen::Index size() const noexcept { return w_.size(); }

 private:
  CVector w_;
};

/// Transmit covariance Psi with trace(Psi) <= 1.
class TransmitCovariance {
 public:
  TransmitCovariance() = default;
  /// Throws Error unless Psi is Hermitian PSD (1e-10) with trace <= 1 + 1e-12.
  explicit TransmitCovariance(CMatrix psi);

  static TransmitCovariance from_beamformer(const Beamformer& w);
  static TransmitCovariance zero(Eigen::Index n) {
    return TransmitCovariance(CMatrix::Zero(n, n));
  }

  const CMatrix& mat() const noexcept { return psi_; }

 private:
  CMatrix psi_;
};

/// Rate pair in bits per channel use.
struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;

  double of(Link link) const noexcept { return link == Link::one ? r1 : r2; }
  RatePoint swapped() const noexcept { return {r2, r1}; }
  void validate() const;
};

/// 2^r - 1, the SINR needed for rate r.
double sinr_target(double rate) noexcept;
/// log2(1 + sinr).
double rate_from_sinr(double sinr) noexcept;

/// log2(1 + h_ii^H Psi_i h_ii / (h_ji^H Psi_j h_ji + sigma_i^2)).
double rate_cov(const ChannelRealization& h, const TransmitCovariance& psi1,
                const TransmitCovariance& psi2, Link link, const Noise& noise);

/// Rank-1 specialization of rate_cov with Psi_i = w_i w_i^H.
double rate_bf(const ChannelRealization& h, const Beamformer& w1,
               const Beamformer& w2, Link link, const Noise& noise);

/// Interference-free rate with the matched filter: log2(1 + ||h_ii||^2/sigma_i^2).
double su_rate(const ChannelRealization& h, Link link, const Noise& noise);

/// h / ||h||, or the zero vector for h == 0.
Beamformer mrt(const CVector& h);

struct ZeroForcing {
  Beamformer w;
  bool degenerate = false;  ///< a == 0 or a parallel to b: no ZF direction
};

/// Normalized projection of `a` onto the orthogonal complement of `b`.
ZeroForcing zf(const CVector& a, const CVector& b);

/// Largest own-signal power |a^H w|^2 reachable with ||w|| <= 1 while the
/// interference |b^H w|^2 stays at most q.
///
/// With a split into its b-aligned part (magnitude c) and the orthogonal
/// rest (magnitude d), the curve is
///   p(q) = ((c/||b||) sqrt(q) + d sqrt(1 - q/||b||^2))^2,  q in [0, q_mrt],
/// rising from the ZF power d^2 to the MRT power ||a||^2. It traces an arc
/// of an ellipse and is concave and nondecreasing there.
struct PowerFrontier {
  double c = 0.0;          ///< |b^H a| / ||b||
  double d = 0.0;          ///< || a - (b^H a/||b||^2) b ||
  double b_norm_sq = 0.0;  ///< ||b||^2
  double p_max = 0.0;      ///< ||a||^2
  double q_mrt = 0.0;      ///< |b^H a|^2 / ||a||^2
  bool degenerate = false; ///< ||b|| == 0: interference is free

  static PowerFrontier from(const CVector& a, const CVector& b);

  /// p(q); q is clamped to [0, q_mrt].
  double power(double q) const noexcept;

  /// Smallest q in [0, q_mrt] with p(q) >= p_target, in closed form.
  /// nullopt when p_target exceeds p_max.
  std::optional<double> min_interference(double p_target) const noexcept;

  /// Same as min_interference, by bisection on p(q) to an absolute tolerance
  /// of 1e-12 * max(1, p_max). Kept as the reference path.
  std::optional<double> min_interference_bisect(double p_target) const noexcept;
};

/// Unit-power beamformer on the frontier of (a, b) causing interference q,
/// phase-aligned so a^H w is real and nonnegative.
Beamformer frontier_beamformer(const CVector& a, const CVector& b, double q);

/// Scalar summary of one realization: both frontiers and both SU rates.
/// Frontier 1 is (a = h11, b = h12); frontier 2 is (a = h22, b = h21).
struct SampleGeometry {
  PowerFrontier f1, f2;
  double su1 = 0.0;
  double su2 = 0.0;

  static SampleGeometry from(const ChannelRealization& h, const Noise& noise);
  SampleGeometry swapped() const noexcept { return {f2, f1, su2, su1}; }
};

/// Outcome of the scalar oracle.
struct OracleResult {
  bool achievable = false;
  /// max over q1 of g(q1) = p1(q1) - gamma1 (q2min(q1) + sigma1^2), or the
  /// link-2 power deficit when link 2 alone is unsatisfiable.
  double g_max = 0.0;
  double q1 = 0.0;  ///< interference caused by TX 1 at the optimizer
  double q2 = 0.0;  ///< interference caused by TX 2 at the optimizer
};

/// Decides (r1, r2) in R(h) from the frontiers alone (no vectors).
OracleResult achievability(const SampleGeometry& g, RatePoint point,
                           const Noise& noise);

struct FeasibilityWitness {
  bool achievable = false;
  Beamformer w1, w2;
  double rate1 = 0.0;
  double rate2 = 0.0;
  double margin = 0.0;        ///< min_i (R_i - r_i)
  double power_margin = 0.0;  ///< OracleResult::g_max
};

/// Comprehensive-hull membership (r1, r2) in R(h) with enabling beamformers.
FeasibilityWitness is_achievable(const ChannelRealization& h, RatePoint point,
                                 const Noise& noise);

/// Largest r2 with (r1, r2) in R(h); nullopt when r1 > R1^SU(h).
std::optional<double> max_r2_given_r1(const ChannelRealization& h, double r1,
                                      const Noise& noise);
/// Largest r1 with (r1, r2) in R(h); nullopt when r2 > R2^SU(h).
std::optional<double> max_r1_given_r2(const ChannelRealization& h, double r2,
                                      const Noise& noise);

/// Scalar path of max_r2_given_r1.
std::optional<double> max_rate2(const SampleGeometry& g, double r1,
                                const Noise& noise);

}  // namespace miso

#endif  // MISO_RATE_CORE_HPP
