// SPDX-License-Identifier: Apache-2.0

#include "miso/rate_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "miso/detail/search.hpp"

namespace miso {

namespace {

// Relative slack when a demanded power meets p_max up to rounding.
constexpr double kPowerRelTol = 1e-12;

double signal_power(const CVector& h, const CVector& w) {
  return std::norm(h.dot(w));
}

double quad_form(const CVector& h, const CMatrix& psi) {
  return std::max(0.0, h.dot(psi * h).real());
}

}  // namespace

Beamformer::Beamformer(CVector w) : w_(std::move(w)) {
  for (Eigen::Index i = 0; i < w_.size(); ++i)
    if (!std::isfinite(w_[i].real()) || !std::isfinite(w_[i].imag()))
      throw Error("beamformer has a non-finite entry");
  if (w_.squaredNorm() > 1.0 + kNormTol)
    throw Error("beamformer violates the power constraint ||w||^2 <= 1");
}

TransmitCovariance::TransmitCovariance(CMatrix psi) : psi_(std::move(psi)) {
  validate_covariance(psi_, "transmit covariance");
  if (psi_.trace().real() > 1.0 + kNormTol)
    throw Error("transmit covariance violates trace(Psi) <= 1");
}

TransmitCovariance TransmitCovariance::from_beamformer(const Beamformer& w) {
  return TransmitCovariance(w.vec() * w.vec().adjoint());
}

void RatePoint::validate() const {
  if (!std::isfinite(r1) || !std::isfinite(r2) || r1 < 0.0 || r2 < 0.0)
    throw Error("rate point must be finite and nonnegative");
}

double sinr_target(double rate) noexcept {
  return std::expm1(rate * std::numbers::ln2);
}

double rate_from_sinr(double sinr) noexcept {
  return std::log1p(sinr) / std::numbers::ln2;
}

double rate_cov(const ChannelRealization& h, const TransmitCovariance& psi1,
                const TransmitCovariance& psi2, Link link, const Noise& noise) {
  const auto n = h.antennas();
  if (psi1.mat().rows() != n || psi2.mat().rows() != n)
    throw Error("transmit covariance dimension does not match the channel");
  const auto& own_psi = link == Link::one ? psi1 : psi2;
  const auto& other_psi = link == Link::one ? psi2 : psi1;
  const double s = quad_form(h.own(link), own_psi.mat());
  const double i = quad_form(h.cross(other(link)), other_psi.mat());
  return rate_from_sinr(s / (i + noise.of(link)));
}

double rate_bf(const ChannelRealization& h, const Beamformer& w1,
               const Beamformer& w2, Link link, const Noise& noise) {
  const auto n = h.antennas();
  if (w1.size() != n || w2.size() != n)
    throw Error("beamformer dimension does not match the channel");
  const auto& own_w = link == Link::one ? w1 : w2;
  const auto& other_w = link == Link::one ? w2 : w1;
  const double s = signal_power(h.own(link), own_w.vec());
  const double i = signal_power(h.cross(other(link)), other_w.vec());
  return rate_from_sinr(s / (i + noise.of(link)));
}

double su_rate(const ChannelRealization& h, Link link, const Noise& noise) {
  return rate_from_sinr(h.own(link).squaredNorm() / noise.of(link));
}

Beamformer mrt(const CVector& h) {
  const double norm = h.norm();
  if (!(norm > 0.0)) return Beamformer::zero(h.size());
  CVector w = h / norm;
  // Guard the unit-norm check against rounding.
  const double sq = w.squaredNorm();
  if (sq > 1.0) w /= std::sqrt(sq);
  return Beamformer(std::move(w));
}

ZeroForcing zf(const CVector& a, const CVector& b) {
  const double b_sq = b.squaredNorm();
  if (!(b_sq > 0.0)) return {mrt(a), !(a.squaredNorm() > 0.0)};
  CVector perp = a - b * (b.dot(a) / b_sq);
  const double norm = perp.norm();
  if (!(norm > 1e-12 * std::max(1.0, a.norm())))
    return {Beamformer::zero(a.size()), true};
  return {mrt(perp), false};
}

PowerFrontier PowerFrontier::from(const CVector& a, const CVector& b) {
  PowerFrontier f;
  f.p_max = a.squaredNorm();
  f.b_norm_sq = b.squaredNorm();
  if (!(f.b_norm_sq > 0.0)) {
    f.degenerate = true;
    f.d = std::sqrt(f.p_max);
    return f;
  }
  const std::complex<double> alpha = b.dot(a);
  const double abs_alpha = std::abs(alpha);
  f.c = abs_alpha / std::sqrt(f.b_norm_sq);
  f.d = (a - b * (alpha / f.b_norm_sq)).norm();
  f.q_mrt = f.p_max > 0.0 ? abs_alpha * abs_alpha / f.p_max : 0.0;
  f.q_mrt = std::min(f.q_mrt, f.b_norm_sq);
  return f;
}

double PowerFrontier::power(double q) const noexcept {
  if (degenerate || !(q_mrt > 0.0)) return p_max;
  if (q >= q_mrt) return p_max;
  q = std::max(q, 0.0);
  const double s = std::sqrt(q / b_norm_sq);
  const double co = std::sqrt(std::max(0.0, 1.0 - s * s));
  const double v = c * s + d * co;
  return std::min(v * v, p_max);
}

std::optional<double> PowerFrontier::min_interference(
    double p_target) const noexcept {
  if (!(p_target > 0.0)) return 0.0;
  if (p_target > p_max * (1.0 + kPowerRelTol)) return std::nullopt;
  if (degenerate || !(q_mrt > 0.0)) return 0.0;
  const double p = std::min(p_target, p_max);
  if (p <= d * d) return 0.0;
  // sin(theta) with sqrt(p) = ||a|| cos(theta - theta_mrt); see header.
  const double s = (c * std::sqrt(p) - d * std::sqrt(std::max(0.0, p_max - p))) / p_max;
  const double q = b_norm_sq * s * s;
  return std::clamp(q, 0.0, q_mrt);
}

std::optional<double> PowerFrontier::min_interference_bisect(
    double p_target) const noexcept {
  if (!(p_target > 0.0)) return 0.0;
  if (p_target > p_max * (1.0 + kPowerRelTol)) return std::nullopt;
  if (power(0.0) >= p_target) return 0.0;
  const double tol = 1e-12 * std::max(1.0, p_max);
  double lo = 0.0, hi = q_mrt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (power(mid) >= p_target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

Beamformer frontier_beamformer(const CVector& a, const CVector& b, double q) {
  const double a_sq = a.squaredNorm();
  const double b_sq = b.squaredNorm();
  if (!(a_sq > 0.0)) return Beamformer::zero(a.size());
  if (!(b_sq > 0.0)) return mrt(a);
  const auto frontier = PowerFrontier::from(a, b);
  q = std::clamp(q, 0.0, frontier.q_mrt);

  const CVector b_hat = b / std::sqrt(b_sq);
  const std::complex<double> alpha = b_hat.dot(a);
  const CVector a_perp = a - b_hat * alpha;
  const double d = a_perp.norm();
  const double s = std::sqrt(q / b_sq);
  const double co = std::sqrt(std::max(0.0, 1.0 - s * s));

  CVector w = CVector::Zero(a.size());
  const double abs_alpha = std::abs(alpha);
  if (abs_alpha > 0.0) w += (s * alpha / abs_alpha) * b_hat;
  if (d > 0.0) w += (co / d) * a_perp;
  const double sq = w.squaredNorm();
  if (sq > 1.0) w /= std::sqrt(sq);
  return Beamformer(std::move(w));
}

SampleGeometry SampleGeometry::from(const ChannelRealization& h,
                                    const Noise& noise) {
  SampleGeometry g;
  g.f1 = PowerFrontier::from(h.h11, h.h12);
  g.f2 = PowerFrontier::from(h.h22, h.h21);
  g.su1 = rate_from_sinr(g.f1.p_max / noise.sigma1_sq);
  g.su2 = rate_from_sinr(g.f2.p_max / noise.sigma2_sq);
  return g;
}

OracleResult achievability(const SampleGeometry& g, RatePoint point,
                           const Noise& noise) {
  const double gamma1 = sinr_target(point.r1);
  const double gamma2 = sinr_target(point.r2);
  const double s1 = noise.sigma1_sq, s2 = noise.sigma2_sq;

  OracleResult out;
  // Link 2 must be satisfiable with TX 1 silent (q1 = 0) at the very least.
  double q1_hi = g.f1.q_mrt;
  if (gamma2 > 0.0) {
    const double deficit = g.f2.p_max - gamma2 * s2;
    if (deficit < -kPowerRelTol * std::max(1.0, g.f2.p_max)) {
      out.g_max = deficit;
      out.q2 = g.f2.q_mrt;
      return out;
    }
    q1_hi = std::min(q1_hi, std::max(0.0, g.f2.p_max / gamma2 - s2));
  }

  auto q2_of = [&](double q1) {
    return g.f2.min_interference(gamma2 * (q1 + s2)).value_or(g.f2.q_mrt);
  };
  auto objective = [&](double q1) {
    return g.f1.power(q1) - gamma1 * (q2_of(q1) + s1);
  };
  const auto best =
      detail::golden_section_max(objective, 0.0, q1_hi, kGoldenIterations);
  out.g_max = best.value;
  out.q1 = best.x;
  out.q2 = q2_of(best.x);
  out.achievable = best.value >= -kPowerSlack;
  return out;
}

FeasibilityWitness is_achievable(const ChannelRealization& h, RatePoint point,
                                 const Noise& noise) {
  point.validate();
  const auto geometry = SampleGeometry::from(h, noise);
  const auto result = achievability(geometry, point, noise);

  FeasibilityWitness witness;
  witness.achievable = result.achievable;
  witness.power_margin = result.g_max;
  witness.w1 = frontier_beamformer(h.h11, h.h12, result.q1);
  witness.w2 = frontier_beamformer(h.h22, h.h21, result.q2);
  witness.rate1 = rate_bf(h, witness.w1, witness.w2, Link::one, noise);
  witness.rate2 = rate_bf(h, witness.w1, witness.w2, Link::two, noise);
  witness.margin = std::min(witness.rate1 - point.r1, witness.rate2 - point.r2);
  return witness;
}

std::optional<double> max_rate2(const SampleGeometry& g, double r1,
                                const Noise& noise) {
  if (r1 > g.su1) return std::nullopt;
  const double gamma1 = sinr_target(r1);
  const double s1 = noise.sigma1_sq, s2 = noise.sigma2_sq;
  if (!(gamma1 > 0.0)) return g.su2;

  // For a given q2, TX 1 runs at the least interference that still carries
  // r1; link 2's SINR is then a concave-over-convex, quasi-concave ratio.
  const double q2_hi =
      std::min(g.f2.q_mrt, std::max(0.0, g.f1.p_max / gamma1 - s1));
  auto sinr2 = [&](double q2) {
    const double q1 =
        g.f1.min_interference(gamma1 * (q2 + s1)).value_or(g.f1.q_mrt);
    return g.f2.power(q2) / (q1 + s2);
  };
  const auto best =
      detail::golden_section_max(sinr2, 0.0, q2_hi, kGoldenIterations);
  return std::min(rate_from_sinr(std::max(0.0, best.value)), g.su2);
}

std::optional<double> max_r2_given_r1(const ChannelRealization& h, double r1,
                                      const Noise& noise) {
  if (!(r1 >= 0.0)) throw Error("rate must be nonnegative");
  return max_rate2(SampleGeometry::from(h, noise), r1, noise);
}

std::optional<double> max_r1_given_r2(const ChannelRealization& h, double r2,
                                      const Noise& noise) {
  if (!(r2 >= 0.0)) throw Error("rate must be nonnegative");
  const Noise swapped{noise.sigma2_sq, noise.sigma1_sq};
  return max_rate2(SampleGeometry::from(h.swapped(), swapped), r2, swapped);
}

}  // namespace miso
