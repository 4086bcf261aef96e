// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo estimation of the case probabilities and simulation of the
// stochastic on/off policy.

#ifndef MISO_OUTAGE_MC_HPP
#define MISO_OUTAGE_MC_HPP

#include <cstdint>
#include <vector>

#include "miso/cases.hpp"
#include "miso/channel.hpp"

namespace miso {

/// Classifies one realization for one rate point (runs the full oracle).
Case classify(const ChannelRealization& h, RatePoint point, const Noise& noise);

/// Estimates of P_A, P_B, P_C1, P_C2, P_D plus the SU exceedance marginals
/// Pr{r_i > R_i^SU}. The five estimates sum to exactly 1.
struct CaseProbabilities {
  double p_a = 0.0, p_b = 0.0, p_c1 = 0.0, p_c2 = 0.0, p_d = 0.0;
  double p_exceed1 = 0.0;  ///< Pr{r1 > R1^SU}
  double p_exceed2 = 0.0;  ///< Pr{r2 > R2^SU}
  CaseCounts counts;       ///< empty for probabilities given directly
  std::uint64_t n = 0;

  static CaseProbabilities from_counts(const CaseCounts& counts);
  /// Abstract probability vector; the SU marginals follow from the case
  /// sets: Pr{r1 > R1^SU} = P_A + P_C2, Pr{r2 > R2^SU} = P_A + P_C1.
  static CaseProbabilities from_probabilities(double p_a, double p_b,
                                              double p_c1, double p_c2,
                                              double p_d);

  double prob(Case c) const noexcept;
  /// sqrt(p (1 - p) / N); zero when N == 0.
  double standard_error(Case c) const noexcept;
  double sum() const noexcept { return p_a + p_b + p_c1 + p_c2 + p_d; }
};

CaseProbabilities estimate_case_probs(const SampleSource& source,
                                      RatePoint point, Exec exec = {});

struct PolicyOutcome {
  PolicyCounts counts;
  std::uint64_t n = 0;

  double success1() const noexcept;
  double success2() const noexcept;
  double outage1() const noexcept { return 1.0 - success1(); }
  double outage2() const noexcept { return 1.0 - success2(); }
};

/// Applies the case policy to every realization: A switches both TXs off,
/// B uses the oracle's beamformers, C1/C2 serve the surviving link with MRT,
/// D flips a coin with Pr{link 1} = bias. Link i succeeds when its achieved
/// SINR meets 2^{r_i} - 1 within kPowerSlack.
PolicyOutcome simulate_policy(const SampleSource& source, RatePoint point,
                              double bias, std::uint64_t coin_seed,
                              Exec exec = {});

/// Per-sample r2*(r1) for one rate column, sharing an Ensemble's samples.
class RateColumn {
 public:
  RateColumn(double r1, std::vector<double> su1, std::vector<double> su2,
             std::vector<double> r2max);

  double r1() const noexcept { return r1_; }
  /// Case probabilities at (r1, r2) from the cached per-sample curves.
  CaseProbabilities case_probs(double r2) const;
  const std::vector<double>& r2max() const noexcept { return r2max_; }

 private:
  double r1_;
  std::vector<double> su1_, su2_, r2max_;
};

/// Frozen sample stream shared by every rate point of a region evaluation
/// (common random numbers).
class Ensemble {
 public:
  explicit Ensemble(const SampleSource& source, Exec exec = {});

  std::size_t size() const noexcept { return geometry_.size(); }
  const Noise& noise() const noexcept { return noise_; }
  const std::vector<SampleGeometry>& geometry() const noexcept {
    return geometry_;
  }

  CaseProbabilities case_probs(RatePoint point, Exec exec = {}) const;
  RateColumn column(double r1, Exec exec = {}) const;

  /// Empirical eps-quantile of R_i^SU: the sorted sample at index
  /// floor(eps * N).
  double su_quantile(Link link, double eps) const;

 private:
  Noise noise_;
  std::vector<SampleGeometry> geometry_;
};

}  // namespace miso

#endif  // MISO_OUTAGE_MC_HPP
