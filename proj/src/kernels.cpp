// SPDX-License-Identifier: Apache-2.0

#include "miso/kernels.hpp"

#include <algorithm>

#include "miso/rng.hpp"

namespace miso::kernels {

namespace {

using Index = std::int64_t;

Index as_index(std::size_t n) { return static_cast<Index>(n); }

double column_entry(const SampleGeometry& g, double r1, const Noise& noise) {
  return max_rate2(g, r1, noise).value_or(-1.0);
}

bool link_succeeds(double signal, double interference, double sigma_sq,
                   double rate) {
  return signal - sinr_target(rate) * (interference + sigma_sq) >= -kPowerSlack;
}

void policy_step(const SampleSource& source, std::size_t k, RatePoint point,
                 double bias, std::uint64_t coin_seed, PolicyCounts& acc) {
  const auto h = source.at(k);
  const auto& noise = source.noise();
  const auto g = SampleGeometry::from(h, noise);
  const bool e1 = point.r1 > g.su1;
  const bool e2 = point.r2 > g.su2;

  Case label;
  Beamformer w1, w2;
  if (e1 && e2) {
    label = Case::A;
  } else if (const auto oracle = achievability(g, point, noise);
             oracle.achievable) {
    label = Case::B;
    w1 = frontier_beamformer(h.h11, h.h12, oracle.q1);
    w2 = frontier_beamformer(h.h22, h.h21, oracle.q2);
  } else {
    label = resolve_case(e1, e2, false);
  }

  bool serve1 = label == Case::C1;
  bool serve2 = label == Case::C2;
  if (label == Case::D) {
    CounterRng coin(coin_seed, Stream::coin, k);
    serve1 = coin.uniform() < bias;
    serve2 = !serve1;
    ++(serve1 ? acc.d1 : acc.d2);
  }
  if (serve1) w1 = mrt(h.h11);
  if (serve2) w2 = mrt(h.h22);
  const auto n = h.antennas();
  if (w1.size() == 0) w1 = Beamformer::zero(n);
  if (w2.size() == 0) w2 = Beamformer::zero(n);

  const double s1 = std::norm(h.h11.dot(w1.vec()));
  const double s2 = std::norm(h.h22.dot(w2.vec()));
  const double i1 = std::norm(h.h21.dot(w2.vec()));
  const double i2 = std::norm(h.h12.dot(w1.vec()));
  acc.success1 += link_succeeds(s1, i1, noise.sigma1_sq, point.r1);
  acc.success2 += link_succeeds(s2, i2, noise.sigma2_sq, point.r2);
  acc.cases.add(label, e1, e2);
}

void stat_step(const SampleSource& source, std::size_t k, const CMatrix& psi1,
               const CMatrix& psi2, RatePoint point, StatCounts& acc) {
  const auto h = source.at(k);
  const auto& noise = source.noise();
  auto form = [](const CVector& v, const CMatrix& psi) {
    return std::max(0.0, v.dot(psi * v).real());
  };
  const double s1 = form(h.h11, psi1), i1 = form(h.h21, psi2);
  const double s2 = form(h.h22, psi2), i2 = form(h.h12, psi1);
  const bool ok1 = s1 >= sinr_target(point.r1) * (i1 + noise.sigma1_sq);
  const bool ok2 = s2 >= sinr_target(point.r2) * (i2 + noise.sigma2_sq);
  ++acc.n;
  acc.success1 += ok1;
  acc.success2 += ok2;
  acc.joint += ok1 && ok2;
}

}  // namespace

std::vector<ChannelRealization> draw_serial(const SampleSource& source) {
  std::vector<ChannelRealization> out(source.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = source.at(k);
  return out;
}

std::vector<ChannelRealization> draw_parallel(const SampleSource& source,
                                              int threads) {
  std::vector<ChannelRealization> out(source.size());
  const Index n = as_index(out.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index k = 0; k < n; ++k) out[k] = source.at(static_cast<std::size_t>(k));
  return out;
}

std::vector<SampleGeometry> geometry_serial(const SampleSource& source) {
  std::vector<SampleGeometry> out(source.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = SampleGeometry::from(source.at(k), source.noise());
  return out;
}

std::vector<SampleGeometry> geometry_parallel(const SampleSource& source,
                                              int threads) {
  std::vector<SampleGeometry> out(source.size());
  const Index n = as_index(out.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index k = 0; k < n; ++k)
    out[k] = SampleGeometry::from(source.at(static_cast<std::size_t>(k)),
                                  source.noise());
  return out;
}

CaseCounts classify_serial(std::span<const SampleGeometry> samples,
                           RatePoint point, const Noise& noise) {
  CaseCounts counts;
  for (const auto& g : samples)
    counts.add(classify(g, point, noise), point.r1 > g.su1, point.r2 > g.su2);
  return counts;
}

CaseCounts classify_parallel(std::span<const SampleGeometry> samples,
                             RatePoint point, const Noise& noise, int threads) {
  CaseCounts total;
  const Index n = as_index(samples.size());
#pragma omp parallel num_threads(threads)
  {
    CaseCounts local;
#pragma omp for schedule(dynamic, 256) nowait
    for (Index k = 0; k < n; ++k) {
      const auto& g = samples[static_cast<std::size_t>(k)];
      local.add(classify(g, point, noise), point.r1 > g.su1, point.r2 > g.su2);
    }
#pragma omp critical(miso_case_counts)
    total += local;
  }
  return total;
}

void column_serial(std::span<const SampleGeometry> samples, double r1,
                   const Noise& noise, std::span<double> out) {
  if (out.size() != samples.size()) throw Error("column buffer size mismatch");
  for (std::size_t k = 0; k < samples.size(); ++k)
    out[k] = column_entry(samples[k], r1, noise);
}

void column_parallel(std::span<const SampleGeometry> samples, double r1,
                     const Noise& noise, std::span<double> out, int threads) {
  if (out.size() != samples.size()) throw Error("column buffer size mismatch");
  const Index n = as_index(samples.size());
#pragma omp parallel for schedule(dynamic, 256) num_threads(threads)
  for (Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out[i] = column_entry(samples[i], r1, noise);
  }
}

PolicyCounts policy_serial(const SampleSource& source, RatePoint point,
                           double bias, std::uint64_t coin_seed) {
  PolicyCounts counts;
  for (std::size_t k = 0; k < source.size(); ++k)
    policy_step(source, k, point, bias, coin_seed, counts);
  return counts;
}

PolicyCounts policy_parallel(const SampleSource& source, RatePoint point,
                             double bias, std::uint64_t coin_seed,
                             int threads) {
  PolicyCounts total;
  const Index n = as_index(source.size());
#pragma omp parallel num_threads(threads)
  {
    PolicyCounts local;
#pragma omp for schedule(dynamic, 256) nowait
    for (Index k = 0; k < n; ++k)
      policy_step(source, static_cast<std::size_t>(k), point, bias, coin_seed,
                  local);
#pragma omp critical(miso_policy_counts)
    total += local;
  }
  return total;
}

StatCounts stat_success_serial(const SampleSource& source, const CMatrix& psi1,
                               const CMatrix& psi2, RatePoint point) {
  StatCounts counts;
  for (std::size_t k = 0; k < source.size(); ++k)
    stat_step(source, k, psi1, psi2, point, counts);
  return counts;
}

StatCounts stat_success_parallel(const SampleSource& source,
                                 const CMatrix& psi1, const CMatrix& psi2,
                                 RatePoint point, int threads) {
  StatCounts total;
  const Index n = as_index(source.size());
#pragma omp parallel num_threads(threads)
  {
    StatCounts local;
#pragma omp for schedule(static) nowait
    for (Index k = 0; k < n; ++k)
      stat_step(source, static_cast<std::size_t>(k), psi1, psi2, point, local);
#pragma omp critical(miso_stat_counts)
    total += local;
  }
  return total;
}

}  // namespace miso::kernels
