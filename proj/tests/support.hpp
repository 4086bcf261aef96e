// SPDX-License-Identifier: Apache-2.0
//
// Test-side reference computations. Nothing here calls into the library's
// frontier, oracle or RNG code.

#ifndef MISO_TESTS_SUPPORT_HPP
#define MISO_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "miso/channel.hpp"
#include "miso/rate_core.hpp"

namespace test {

using miso::CMatrix;
using miso::CVector;

inline CVector gaussian_vector(std::mt19937_64& gen, Eigen::Index n,
                               double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5) * scale);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = {nd(gen), nd(gen)};
  return v;
}

inline miso::ChannelRealization gaussian_channel(std::mt19937_64& gen,
                                                 Eigen::Index n,
                                                 double cross_scale = 1.0) {
  return {gaussian_vector(gen, n), gaussian_vector(gen, n, cross_scale),
          gaussian_vector(gen, n, cross_scale), gaussian_vector(gen, n)};
}

inline CVector unit_vector(std::mt19937_64& gen, Eigen::Index n) {
  CVector v = gaussian_vector(gen, n);
  return v / v.norm();
}

/// Random PSD matrix G G^H / n with G n x n Gaussian, scaled to trace `tr`.
inline CMatrix random_covariance(std::mt19937_64& gen, Eigen::Index n,
                                 double tr = 1.0) {
  CMatrix g(n, n);
  for (Eigen::Index c = 0; c < n; ++c) g.col(c) = gaussian_vector(gen, n);
  CMatrix q = g * g.adjoint();
  return q * (tr / q.trace().real());
}

inline double power_gain(const CVector& h, const CVector& w) {
  return std::norm(h.dot(w));
}

/// log2(1 + S / (I + sigma^2)) straight from the definition.
inline double rate_direct(const miso::ChannelRealization& h, const CVector& w1,
                          const CVector& w2, int link, double sigma_sq) {
  if (link == 1)
    return std::log2(1.0 + power_gain(h.h11, w1) /
                               (power_gain(h.h21, w2) + sigma_sq));
  return std::log2(1.0 + power_gain(h.h22, w2) /
                             (power_gain(h.h12, w1) + sigma_sq));
}

/// Frontier power max |a^H w|^2 s.t. |b^H w|^2 <= q, ||w|| <= 1, computed by
/// maximizing over the 2-D subspace spanned by b and the part of a
/// orthogonal to b, parametrized as w = cos(t) u + sin(t) v with u, v
/// orthonormal and the phase of u aligned to a. Dense scan on t, then a
/// local refinement.
struct FrontierRef {
  CVector a, b;
  double bn2 = 0.0, amp_u = 0.0, amp_v = 0.0;

  FrontierRef(CVector a_, CVector b_) : a(std::move(a_)), b(std::move(b_)) {
    bn2 = b.squaredNorm();
    const CVector u = b / std::sqrt(bn2);
    const CVector perp = a - u * u.dot(a);
    amp_u = std::abs(u.dot(a));
    amp_v = perp.norm();
  }

  double q_mrt() const {
    const double an2 = a.squaredNorm();
    return an2 > 0 ? std::norm(b.dot(a)) / an2 : 0.0;
  }

  double power(double q) const {
    // t in [0, pi/2]: interference bn2 cos^2 t, signal (amp_u cos t + amp_v sin t)^2.
    const double pmax = a.squaredNorm();
    if (q >= q_mrt()) return pmax;
    const double c_min = std::sqrt(std::clamp(q / bn2, 0.0, 1.0));
    const double t_min = std::acos(c_min);
    // Signal increases as t decreases toward atan(amp_v/amp_u), which is
    // below t_min here, so the best feasible t is t_min; check a scan too.
    auto sig = [&](double t) {
      const double s = amp_u * std::cos(t) + amp_v * std::sin(t);
      return s * s;
    };
    double best = sig(t_min);
    const int steps = 64;
    for (int k = 0; k <= steps; ++k) {
      const double t = t_min + (M_PI / 2 - t_min) * k / steps;
      best = std::max(best, sig(t));
    }
    return std::min(best, pmax);
  }
};

}  // namespace test

#endif  // MISO_TESTS_SUPPORT_HPP
