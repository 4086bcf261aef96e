// SPDX-License-Identifier: Apache-2.0

#include "miso/outage_mc.hpp"

#include <algorithm>
#include <cmath>

#include "miso/kernels.hpp"

namespace miso {

Case classify(const ChannelRealization& h, RatePoint point,
              const Noise& noise) {
  point.validate();
  return classify(SampleGeometry::from(h, noise), point, noise);
}

CaseProbabilities CaseProbabilities::from_counts(const CaseCounts& counts) {
  if (counts.n == 0) throw Error("case probabilities need at least one sample");
  CaseProbabilities p;
  p.counts = counts;
  p.n = counts.n;
  const auto n = static_cast<double>(counts.n);
  p.p_a = static_cast<double>(counts[Case::A]) / n;
  p.p_b = static_cast<double>(counts[Case::B]) / n;
  p.p_c1 = static_cast<double>(counts[Case::C1]) / n;
  p.p_c2 = static_cast<double>(counts[Case::C2]) / n;
  // Close the partition so the five estimates add to 1 in floating point.
  p.p_d = std::max(0.0, 1.0 - (p.p_a + p.p_b + p.p_c1 + p.p_c2));
  p.p_exceed1 = static_cast<double>(counts.exceed1) / n;
  p.p_exceed2 = static_cast<double>(counts.exceed2) / n;
  return p;
}

CaseProbabilities CaseProbabilities::from_probabilities(double p_a, double p_b,
                                                        double p_c1,
                                                        double p_c2,
                                                        double p_d) {
  for (double v : {p_a, p_b, p_c1, p_c2, p_d})
    if (!(v >= 0.0 && v <= 1.0)) throw Error("probabilities must lie in [0, 1]");
  if (std::abs(p_a + p_b + p_c1 + p_c2 + p_d - 1.0) > 1e-9)
    throw Error("case probabilities must sum to one");
  CaseProbabilities p;
  p.p_a = p_a;
  p.p_b = p_b;
  p.p_c1 = p_c1;
  p.p_c2 = p_c2;
  p.p_d = p_d;
  p.p_exceed1 = p_a + p_c2;
  p.p_exceed2 = p_a + p_c1;
  return p;
}

double CaseProbabilities::prob(Case c) const noexcept {
  switch (c) {
    case Case::A: return p_a;
    case Case::B: return p_b;
    case Case::C1: return p_c1;
    case Case::C2: return p_c2;
    case Case::D: return p_d;
  }
  return 0.0;
}

double CaseProbabilities::standard_error(Case c) const noexcept {
  if (n == 0) return 0.0;
  const double p = prob(c);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

CaseProbabilities estimate_case_probs(const SampleSource& source,
                                      RatePoint point, Exec exec) {
  point.validate();
  return Ensemble(source, exec).case_probs(point, exec);
}

double PolicyOutcome::success1() const noexcept {
  return n ? static_cast<double>(counts.success1) / static_cast<double>(n) : 0.0;
}

double PolicyOutcome::success2() const noexcept {
  return n ? static_cast<double>(counts.success2) / static_cast<double>(n) : 0.0;
}

PolicyOutcome simulate_policy(const SampleSource& source, RatePoint point,
                              double bias, std::uint64_t coin_seed, Exec exec) {
  point.validate();
  if (!(bias >= 0.0 && bias <= 1.0)) throw Error("coin bias must lie in [0, 1]");
  PolicyOutcome out;
  out.counts = exec.serial()
                   ? kernels::policy_serial(source, point, bias, coin_seed)
                   : kernels::policy_parallel(source, point, bias, coin_seed,
                                              exec.resolved());
  out.n = out.counts.cases.n;
  return out;
}

RateColumn::RateColumn(double r1, std::vector<double> su1,
                       std::vector<double> su2, std::vector<double> r2max)
    : r1_(r1), su1_(std::move(su1)), su2_(std::move(su2)), r2max_(std::move(r2max)) {
  if (su1_.size() != su2_.size() || su1_.size() != r2max_.size())
    throw Error("rate column arrays must share one length");
}

CaseProbabilities RateColumn::case_probs(double r2) const {
  CaseCounts counts;
  for (std::size_t k = 0; k < su1_.size(); ++k) {
    const bool e1 = r1_ > su1_[k];
    const bool e2 = r2 > su2_[k];
    const bool joint = !e1 && r2 <= r2max_[k];
    counts.add(resolve_case(e1, e2, joint), e1, e2);
  }
  return CaseProbabilities::from_counts(counts);
}

Ensemble::Ensemble(const SampleSource& source, Exec exec)
    : noise_(source.noise()),
      geometry_(exec.serial()
                    ? kernels::geometry_serial(source)
                    : kernels::geometry_parallel(source, exec.resolved())) {
  if (geometry_.empty()) throw Error("sample source is empty");
}

CaseProbabilities Ensemble::case_probs(RatePoint point, Exec exec) const {
  point.validate();
  const auto counts =
      exec.serial()
          ? kernels::classify_serial(geometry_, point, noise_)
          : kernels::classify_parallel(geometry_, point, noise_, exec.resolved());
  return CaseProbabilities::from_counts(counts);
}

RateColumn Ensemble::column(double r1, Exec exec) const {
  if (!(r1 >= 0.0)) throw Error("rate must be nonnegative");
  std::vector<double> su1(size()), su2(size()), r2max(size());
  for (std::size_t k = 0; k < size(); ++k) {
    su1[k] = geometry_[k].su1;
    su2[k] = geometry_[k].su2;
  }
  if (exec.serial())
    kernels::column_serial(geometry_, r1, noise_, r2max);
  else
    kernels::column_parallel(geometry_, r1, noise_, r2max, exec.resolved());
  return RateColumn(r1, std::move(su1), std::move(su2), std::move(r2max));
}

double Ensemble::su_quantile(Link link, double eps) const {
  if (!(eps >= 0.0 && eps < 1.0)) throw Error("quantile level must be in [0, 1)");
  std::vector<double> su(size());
  for (std::size_t k = 0; k < size(); ++k)
    su[k] = link == Link::one ? geometry_[k].su1 : geometry_[k].su2;
  const auto idx = std::min(
      su.size() - 1, static_cast<std::size_t>(std::floor(eps * static_cast<double>(su.size()))));
  std::nth_element(su.begin(), su.begin() + static_cast<std::ptrdiff_t>(idx), su.end());
  return su[idx];
}

}  // namespace miso
