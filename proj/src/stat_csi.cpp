// SPDX-License-Identifier: Apache-2.0

#include "miso/stat_csi.hpp"

#include <algorithm>
#include <cmath>

#include "miso/kernels.hpp"
#include "miso/rng.hpp"

namespace miso {

namespace {

double quad(const CVector& w, const CMatrix& q) {
  return std::max(0.0, w.dot(q * w).real());
}

}  // namespace

ExponentialLinkModel effective_means(const ChannelStatistics& stats,
                                     const Beamformer& w1, const Beamformer& w2,
                                     Link link) {
  if (w1.size() != stats.n || w2.size() != stats.n)
    throw Error("beamformer dimension does not match the statistics");
  if (link == Link::one)
    return {quad(w1.vec(), stats.q11), quad(w2.vec(), stats.q21),
            stats.noise.sigma1_sq};
  return {quad(w2.vec(), stats.q22), quad(w1.vec(), stats.q12),
          stats.noise.sigma2_sq};
}

double link_success_closed_form(const ExponentialLinkModel& model, double r) {
  if (!(r >= 0.0)) throw Error("rate must be nonnegative");
  const double gamma = sinr_target(r);
  if (!(gamma > 0.0)) return 1.0;
  if (!(model.s_bar > 0.0)) return 0.0;
  const double tail = std::exp(-gamma * model.sigma_sq / model.s_bar);
  if (!(model.t_bar > 0.0)) return tail;
  return tail * model.s_bar / (model.s_bar + gamma * model.t_bar);
}

std::optional<double> max_rate_for_success(const ExponentialLinkModel& model,
                                           double target) {
  if (target > 1.0 + kProbTol) return std::nullopt;
  if (!(model.s_bar > 0.0)) return 0.0;
  if (!(target > 0.0)) throw Error("success target must be positive");
  auto ok = [&](double r) { return link_success_closed_form(model, r) >= target; };
  double lo = 0.0, hi = 1.0;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 4096.0) return hi;
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

StatMembership stat_member(const ChannelStatistics& stats, const Beamformer& w1,
                           const Beamformer& w2, RatePoint point,
                           const OutageSpec& spec) {
  point.validate();
  StatMembership out;
  out.pi1 = link_success_closed_form(effective_means(stats, w1, w2, Link::one),
                                     point.r1);
  out.pi2 = link_success_closed_form(effective_means(stats, w1, w2, Link::two),
                                     point.r2);
  if (spec.mode == OutageSpec::Mode::common) {
    out.margins = {out.pi1 * out.pi2 - (1.0 - spec.eps1)};
  } else {
    out.margins = {out.pi1 - (1.0 - spec.eps1), out.pi2 - (1.0 - spec.eps2)};
  }
  out.member = std::all_of(out.margins.begin(), out.margins.end(),
                           [](double m) { return m >= -kProbTol; });
  return out;
}

double StatMcEstimate::standard_error(double p) const noexcept {
  return n ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
}

StatMcEstimate stat_member_mc(const ChannelStatistics& stats,
                              const TransmitCovariance& psi1,
                              const TransmitCovariance& psi2, RatePoint point,
                              const OutageSpec& spec, const SampleSource& source,
                              Exec exec) {
  point.validate();
  if (psi1.mat().rows() != stats.n || psi2.mat().rows() != stats.n ||
      source.antennas() != stats.n)
    throw Error("transmit covariance dimension does not match the statistics");
  const auto counts =
      exec.serial()
          ? kernels::stat_success_serial(source, psi1.mat(), psi2.mat(), point)
          : kernels::stat_success_parallel(source, psi1.mat(), psi2.mat(),
                                           point, exec.resolved());
  StatMcEstimate out;
  out.n = counts.n;
  if (out.n == 0) throw Error("sample source is empty");
  const auto n = static_cast<double>(counts.n);
  out.pi1 = static_cast<double>(counts.success1) / n;
  out.pi2 = static_cast<double>(counts.success2) / n;
  out.joint = static_cast<double>(counts.joint) / n;
  if (spec.mode == OutageSpec::Mode::common)
    out.member = out.joint >= 1.0 - spec.eps1 - kProbTol;
  else
    out.member = out.pi1 >= 1.0 - spec.eps1 - kProbTol &&
                 out.pi2 >= 1.0 - spec.eps2 - kProbTol;
  return out;
}

Beamformer random_unit_beamformer(Eigen::Index n, std::uint64_t seed,
                                  std::uint64_t index) {
  CounterRng rng(seed, Stream::beamformer, index);
  CVector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.complex_normal();
  return mrt(z);
}

StatisticalRegion::StatisticalRegion(const ChannelStatistics& stats,
                                     const OutageSpec& spec,
                                     const SearchConfig& search, Exec exec)
    : spec_(spec) {
  spec_.validate();
  if (search.pairs == 0) throw Error("beamformer search needs at least one pair");
  const auto checked = validate_statistics(stats);
  pairs_.resize(search.pairs);
  const auto count = static_cast<std::int64_t>(search.pairs);
#pragma omp parallel for schedule(static) num_threads(exec.resolved())
  for (std::int64_t m = 0; m < count; ++m) {
    auto& pair = pairs_[static_cast<std::size_t>(m)];
    const auto idx = static_cast<std::uint64_t>(m);
    pair.w1 = random_unit_beamformer(checked.n, search.seed, 2 * idx);
    pair.w2 = random_unit_beamformer(checked.n, search.seed, 2 * idx + 1);
    pair.link1 = effective_means(checked, pair.w1, pair.w2, Link::one);
    pair.link2 = effective_means(checked, pair.w1, pair.w2, Link::two);
  }
  if (spec_.mode == OutageSpec::Mode::individual) {
    corners_.reserve(pairs_.size());
    for (const auto& pair : pairs_)
      corners_.emplace_back(*max_rate_for_success(pair.link1, 1.0 - spec_.eps1),
                            *max_rate_for_success(pair.link2, 1.0 - spec_.eps2));
  }
}

StatMembership StatisticalRegion::evaluate(const BeamformerPair& pair,
                                           RatePoint point) const {
  StatMembership out;
  out.pi1 = link_success_closed_form(pair.link1, point.r1);
  out.pi2 = link_success_closed_form(pair.link2, point.r2);
  if (spec_.mode == OutageSpec::Mode::common)
    out.margins = {out.pi1 * out.pi2 - (1.0 - spec_.eps1)};
  else
    out.margins = {out.pi1 - (1.0 - spec_.eps1), out.pi2 - (1.0 - spec_.eps2)};
  out.member = std::all_of(out.margins.begin(), out.margins.end(),
                           [](double m) { return m >= -kProbTol; });
  return out;
}

bool StatisticalRegion::member(RatePoint point) const {
  point.validate();
  return std::any_of(pairs_.begin(), pairs_.end(), [&](const auto& pair) {
    return evaluate(pair, point).member;
  });
}

std::optional<double> StatisticalRegion::pair_max_r2(const BeamformerPair& pair,
                                                     double r1) const {
  if (spec_.mode == OutageSpec::Mode::individual) {
    if (r1 > *max_rate_for_success(pair.link1, 1.0 - spec_.eps1))
      return std::nullopt;
    return max_rate_for_success(pair.link2, 1.0 - spec_.eps2);
  }
  const double pi1 = link_success_closed_form(pair.link1, r1);
  const double need = 1.0 - spec_.eps1;
  if (pi1 < need - kProbTol) return std::nullopt;
  return max_rate_for_success(pair.link2, std::min(1.0, need / pi1));
}

std::optional<double> StatisticalRegion::indexed_max_r2(std::size_t i,
                                                        double r1) const {
  if (spec_.mode == OutageSpec::Mode::common) return pair_max_r2(pairs_[i], r1);
  if (r1 > corners_[i].first) return std::nullopt;
  return corners_[i].second;
}

std::optional<double> StatisticalRegion::max_r2(double r1) const {
  std::optional<double> best;
  for (std::size_t i = 0; i < pairs_.size(); ++i)
    if (const auto r2 = indexed_max_r2(i, r1); r2 && (!best || *r2 > *best))
      best = r2;
  return best;
}

RegionBoundary StatisticalRegion::boundary(const GridConfig& grid) const {
  grid.validate();
  RegionBoundary out;
  out.grid = grid;
  out.scenario = spec_.mode == OutageSpec::Mode::common ? "common-stat"
                                                        : "individual-stat";
  for (int k = 0; k < grid.columns; ++k) {
    const double r1 = grid.r1_at(k);
    out.columns.push_back({r1, max_r2(r1)});
  }

  std::vector<BoundaryPoint> points;
  auto add = [&](const BeamformerPair& pair, RatePoint p) {
    points.push_back({p, std::nullopt, evaluate(pair, p).margins});
  };
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& pair = pairs_[i];
    if (spec_.mode == OutageSpec::Mode::individual) {
      add(pair, {corners_[i].first, corners_[i].second});
      continue;
    }
    // Common mode: trace this pair's Pareto curve on a grid of r1.
    const double r1_max = *max_rate_for_success(pair.link1, 1.0 - spec_.eps1);
    for (int k = 0; k < grid.columns; ++k) {
      const double r1 = r1_max * k / (grid.columns - 1);
      if (const auto r2 = indexed_max_r2(i, r1)) add(pair, {r1, *r2});
    }
  }
  out.points = non_dominated(std::move(points));
  return out;
}

RegionBoundary search_stat_boundary(const ChannelStatistics& stats,
                                    const OutageSpec& spec,
                                    const SearchConfig& search,
                                    const GridConfig& grid, Exec exec) {
  auto boundary = StatisticalRegion(stats, spec, search, exec).boundary(grid);
  boundary.seed = search.seed;
  boundary.samples = search.pairs;
  return boundary;
}

}  // namespace miso
