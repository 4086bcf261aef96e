// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "miso/rate_core.hpp"
#include "support.hpp"

using namespace miso;
using cd = std::complex<double>;

namespace {

CVector vec2(cd a, cd b) {
  CVector v(2);
  v << a, b;
  return v;
}

ChannelRealization aligned() {
  const auto e = vec2(1, 0);
  return {e, e, e, e};
}

ChannelRealization orthogonal_cross() {
  return {vec2(1, 0), vec2(0, 1), vec2(1, 0), vec2(0, 1)};
}

const Noise kUnitNoise{1.0, 1.0};

/// Exhaustive search over unit-norm n = 2 beamformers
/// w = (cos t, sin t e^{i phi}) for max |a^H w|^2 with |b^H w|^2 <= q.
double frontier_by_grid(const CVector& a, const CVector& b, double q, int steps) {
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = M_PI / 2 * i / steps;
    for (int j = 0; j < 2 * steps; ++j) {
      const double phi = M_PI * j / steps;
      const CVector w = vec2(std::cos(t), std::polar(std::sin(t), phi));
      if (std::norm(b.dot(w)) <= q) best = std::max(best, std::norm(a.dot(w)));
    }
  }
  return best;
}

/// Largest r2 with is_achievable, by bisection to 1e-10.
double max_r2_by_bisection(const ChannelRealization& h, double r1, const Noise& noise) {
  double lo = 0.0, hi = su_rate(h, Link::two, noise);
  if (is_achievable(h, {r1, hi}, noise).achievable) return hi;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (is_achievable(h, {r1, mid}, noise).achievable ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("rate_cov examples") {
  const ChannelRealization h(vec2(1, 0), vec2(0.3, 0.2), vec2(1, 0), vec2(0.5, 1));
  CMatrix p1 = CMatrix::Zero(2, 2);
  p1(0, 0) = 1.0;
  const TransmitCovariance psi1(p1), off = TransmitCovariance::zero(2);
  CHECK(rate_cov(h, psi1, off, Link::one, kUnitNoise) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rate_cov(h, off, psi1, Link::one, kUnitNoise) == 0.0);
  CHECK(rate_cov(h, psi1, psi1, Link::one, kUnitNoise) ==
        doctest::Approx(std::log2(1.5)).epsilon(1e-14));
  CHECK(std::log2(1.5) == doctest::Approx(0.58496).epsilon(1e-5));
  CHECK_THROWS_AS(rate_cov(h, TransmitCovariance::zero(3), off, Link::one, kUnitNoise), Error);
}

TEST_CASE("rate_bf examples") {
  const ChannelRealization h(vec2(1, 0), vec2(0.2, 0.4), vec2(0, 1), vec2(1, 1));
  const Beamformer w1(vec2(1, 0)), w2(vec2(0, 1));
  CHECK(rate_bf(h, w1, w2, Link::one, kUnitNoise) == doctest::Approx(std::log2(1.5)));
  CHECK(rate_bf(h, w1, Beamformer::zero(2), Link::one, kUnitNoise) ==
        doctest::Approx(std::log2(2.0)));

  std::mt19937_64 gen(1);
  for (int t = 0; t < 100; ++t) {
    const auto g = test::gaussian_channel(gen, 3);
    const Beamformer a(test::unit_vector(gen, 3)), b(0.7 * test::unit_vector(gen, 3));
    const Noise noise{0.3 + 0.01 * t, 1.1};
    for (auto link : {Link::one, Link::two}) {
      const double bf = rate_bf(g, a, b, link, noise);
      const double cov = rate_cov(g, TransmitCovariance::from_beamformer(a),
                                  TransmitCovariance::from_beamformer(b), link, noise);
      CHECK(std::abs(bf - cov) <= 1e-12);
      CHECK(std::abs(bf - test::rate_direct(g, a.vec(), b.vec(), link == Link::one ? 1 : 2,
                                            noise.of(link))) <= 1e-12);
    }
  }
}

TEST_CASE("su_rate and mrt") {
  const ChannelRealization h(vec2(1, cd(0, std::sqrt(2.0))), vec2(1, 1), vec2(1, 1),
                             vec2(0, 0));
  CHECK(su_rate(h, Link::one, kUnitNoise) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(su_rate(h, Link::two, kUnitNoise) == 0.0);

  const auto m = mrt(vec2(3, cd(0, 4)));
  CHECK(std::abs(m.vec()[0] - cd(0.6, 0)) < 1e-15);
  CHECK(std::abs(m.vec()[1] - cd(0, 0.8)) < 1e-15);
  CHECK(mrt(vec2(0, 0)).vec().norm() == 0.0);

  std::mt19937_64 gen(2);
  for (int t = 0; t < 100; ++t) {
    const auto g = test::gaussian_channel(gen, 4);
    const Noise noise{0.5, 2.0};
    const auto w = mrt(g.h11);
    CHECK(std::abs(std::norm(g.h11.dot(w.vec())) / g.h11.squaredNorm() - 1.0) <= 1e-12);
    CHECK(std::abs(su_rate(g, Link::one, noise) -
                   rate_bf(g, w, Beamformer::zero(4), Link::one, noise)) <= 1e-12);
    // SU rate bounds every feasible rate.
    const Beamformer other(test::unit_vector(gen, 4));
    CHECK(rate_bf(g, w, other, Link::one, noise) <= su_rate(g, Link::one, noise) + 1e-12);
  }
}

TEST_CASE("zero forcing") {
  const auto z = zf(vec2(1, 1), vec2(1, 0));
  CHECK_FALSE(z.degenerate);
  CHECK(std::abs(z.w.vec()[0]) < 1e-15);
  CHECK(std::abs(z.w.vec()[1] - cd(1, 0)) < 1e-15);

  const auto par = zf(vec2(1, cd(0, 1)), vec2(cd(0, 2), -2));
  CHECK(par.degenerate);
  CHECK(par.w.vec().norm() == 0.0);

  const auto free = zf(vec2(3, cd(0, 4)), vec2(0, 0));
  CHECK_FALSE(free.degenerate);
  CHECK((free.w.vec() - mrt(vec2(3, cd(0, 4))).vec()).norm() < 1e-15);

  std::mt19937_64 gen(3);
  for (int t = 0; t < 100; ++t) {
    const auto a = test::gaussian_vector(gen, 3), b = test::gaussian_vector(gen, 3);
    const auto w = zf(a, b).w;
    CHECK(std::abs(b.dot(w.vec())) < 1e-10);
    CHECK(std::abs(w.vec().norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("power frontier examples") {
  const auto f = PowerFrontier::from(vec2(1, 1), vec2(1, 0));
  CHECK(f.c == doctest::Approx(1.0));
  CHECK(f.d == doctest::Approx(1.0));
  CHECK(f.q_mrt == doctest::Approx(0.5));
  CHECK(f.power(0.5) == doctest::Approx(2.0));
  CHECK(f.power(0.0) == doctest::Approx(1.0));
  const double expect = std::pow(0.5 + std::sqrt(0.75), 2);
  CHECK(f.power(0.25) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(1.8660).epsilon(1e-4));
  // Dense grid over unit beamformers approaches the closed form from below.
  const double grid = frontier_by_grid(vec2(1, 1), vec2(1, 0), 0.25, 600);
  CHECK(grid <= expect + 1e-12);
  CHECK(grid >= expect - 1e-4);

  CHECK(*f.min_interference(0.0) == 0.0);
  CHECK(*f.min_interference(2.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*f.min_interference(expect) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(*f.min_interference(1.8660) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK_FALSE(f.min_interference(2.0 + 1e-6).has_value());
  CHECK(*f.min_interference_bisect(expect) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("power frontier degenerate branches") {
  const auto free = PowerFrontier::from(vec2(1, 2), vec2(0, 0));
  CHECK(free.degenerate);
  CHECK(free.power(0.0) == doctest::Approx(5.0));
  CHECK(*free.min_interference(5.0) == 0.0);

  const auto orth = PowerFrontier::from(vec2(1, 0), vec2(0, 1));
  CHECK(orth.q_mrt == 0.0);
  CHECK(orth.power(0.0) == doctest::Approx(1.0));

  const auto par = PowerFrontier::from(vec2(1, 0), vec2(2, 0));
  CHECK(par.d == 0.0);
  CHECK(par.power(0.0) == 0.0);
  CHECK(par.power(par.q_mrt) == doctest::Approx(1.0));
  CHECK(par.q_mrt == doctest::Approx(4.0));

  const auto dead = PowerFrontier::from(vec2(0, 0), vec2(1, 0));
  CHECK(dead.power(0.3) == 0.0);
  CHECK(*dead.min_interference(0.0) == 0.0);
  CHECK_FALSE(dead.min_interference(1e-3).has_value());
}

TEST_CASE("frontier identities and inverse over random channels") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = 2 + t % 3;
    const auto a = test::gaussian_vector(gen, n), b = test::gaussian_vector(gen, n);
    const auto f = PowerFrontier::from(a, b);
    const double zf_power = std::norm(a.dot(zf(a, b).w.vec()));
    CHECK(std::abs(f.c * f.c + f.d * f.d - f.p_max) <= 1e-9 * f.p_max);
    CHECK(f.q_mrt <= f.b_norm_sq);
    CHECK(std::abs(f.power(0.0) - zf_power) <= 1e-9 * f.p_max);
    CHECK(std::abs(f.power(f.q_mrt) - f.p_max) <= 1e-9 * f.p_max);

    // Reference frontier computed from the 2-D subspace parametrization.
    const test::FrontierRef ref(a, b);
    double prev = -1.0;
    for (int k = 0; k <= 20; ++k) {
      const double q = f.q_mrt * k / 20.0;
      const double p = f.power(q);
      CHECK(std::abs(p - ref.power(q)) <= 1e-9 * f.p_max);
      CHECK(p >= prev - 1e-12);
      prev = p;
      if (k > 0 && k < 20) {
        // Concavity against the chord of the neighbours.
        const double h = f.q_mrt / 20.0;
        CHECK(p >= 0.5 * (f.power(q - h) + f.power(q + h)) - 1e-12 * f.p_max);
      }
    }

    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double target = f.power(0.0) + u(gen) * (f.p_max - f.power(0.0));
    const auto closed = f.min_interference(target);
    const auto bis = f.min_interference_bisect(target);
    REQUIRE(closed.has_value());
    REQUIRE(bis.has_value());
    CHECK(std::abs(*closed - *bis) <= 1e-6 * std::max(1.0, f.q_mrt));
    CHECK(f.power(*closed) >= target - 1e-9 * f.p_max);

    // Witness beamformer sits on the frontier.
    const double q = u(gen) * f.q_mrt;
    const auto w = frontier_beamformer(a, b, q);
    CHECK(w.power() <= 1.0 + 1e-12);
    CHECK(std::norm(b.dot(w.vec())) <= q + 1e-9 * std::max(1.0, f.b_norm_sq));
    CHECK(std::abs(std::norm(a.dot(w.vec())) - f.power(q)) <= 1e-9 * f.p_max);
    CHECK(std::abs(a.dot(w.vec()).imag()) <= 1e-9 * std::sqrt(f.p_max));
  }
}

TEST_CASE("frontier optimality against random beamformers") {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 20; ++t) {
    const auto a = test::gaussian_vector(gen, 2), b = test::gaussian_vector(gen, 2);
    const auto f = PowerFrontier::from(a, b);
    for (int k = 0; k < 2000; ++k) {
      const auto w = test::unit_vector(gen, 2);
      const double q = std::norm(b.dot(w)), p = std::norm(a.dot(w));
      REQUIRE(p <= f.power(std::min(q, f.q_mrt)) + 1e-9);
    }
  }
}

TEST_CASE("is_achievable examples") {
  const auto orth = is_achievable(orthogonal_cross(), {1.0, 1.0}, kUnitNoise);
  CHECK(orth.achievable);
  CHECK(orth.rate1 >= 1.0 - 1e-9);
  CHECK(orth.rate2 >= 1.0 - 1e-9);

  CHECK_FALSE(is_achievable(aligned(), {1.0, 1.0}, kUnitNoise).achievable);

  const double r = std::log2(1.5);
  const auto w = is_achievable(aligned(), {r, r}, kUnitNoise);
  CHECK(w.achievable);
  CHECK(w.w1.power() == doctest::Approx(1.0));
  CHECK(w.w2.power() == doctest::Approx(1.0));

  // Brute force over transmit powers (x, y) in [0, 1]^2 with step 1e-3.
  auto grid_achievable = [](double r1, double r2) {
    const double g1 = std::exp2(r1) - 1, g2 = std::exp2(r2) - 1;
    for (int i = 0; i <= 1000; ++i)
      for (int j = 0; j <= 1000; ++j) {
        const double x = i / 1000.0, y = j / 1000.0;
        if (x >= g1 * (y + 1) - 1e-12 && y >= g2 * (x + 1) - 1e-12) return true;
      }
    return false;
  };
  CHECK(grid_achievable(r, r));
  CHECK_FALSE(grid_achievable(1.0, 1.0));
  for (double r1 : {0.0, 0.2, 0.4, 0.55, 0.7, 1.0})
    for (double r2 : {0.0, 0.2, 0.4, 0.55, 0.7, 1.0}) {
      const auto oracle = is_achievable(aligned(), {r1, r2}, kUnitNoise);
      if (std::abs(oracle.power_margin) > 1e-3)
        CHECK(oracle.achievable == grid_achievable(r1, r2));
    }
}

TEST_CASE("max_r2_given_r1 examples") {
  std::mt19937_64 gen(6);
  const auto g = test::gaussian_channel(gen, 2);
  const Noise noise{0.5, 0.5};
  CHECK(*max_r2_given_r1(g, 0.0, noise) ==
        doctest::Approx(su_rate(g, Link::two, noise)).epsilon(1e-12));
  CHECK(*max_r2_given_r1(aligned(), 1.0, kUnitNoise) == doctest::Approx(0.0));
  const double r = std::log2(1.5);
  CHECK(std::abs(*max_r2_given_r1(aligned(), r, kUnitNoise) - r) < 1e-9);
  CHECK_FALSE(max_r2_given_r1(g, su_rate(g, Link::one, noise) + 1e-6, noise).has_value());
}

TEST_CASE("oracle properties on random channels") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int achievable = 0;
  for (int t = 0; t < 300; ++t) {
    const Eigen::Index n = 2 + t % 2;
    const auto h = test::gaussian_channel(gen, n, 0.3 + 1.5 * u(gen));
    const Noise noise{0.2 + u(gen), 0.2 + u(gen)};
    const double su1 = su_rate(h, Link::one, noise), su2 = su_rate(h, Link::two, noise);
    const RatePoint p{u(gen) * 1.1 * su1, u(gen) * 1.1 * su2};
    const auto w = is_achievable(h, p, noise);
    achievable += w.achievable;

    if (w.achievable) {
      CHECK(p.r1 <= su1 + 1e-12);
      CHECK(p.r2 <= su2 + 1e-12);
      CHECK(w.w1.power() <= 1.0 + 1e-12);
      CHECK(w.w2.power() <= 1.0 + 1e-12);
      CHECK(test::rate_direct(h, w.w1.vec(), w.w2.vec(), 1, noise.sigma1_sq) >= p.r1 - 1e-6);
      CHECK(test::rate_direct(h, w.w1.vec(), w.w2.vec(), 2, noise.sigma2_sq) >= p.r2 - 1e-6);
      CHECK(w.margin >= -1e-6);
      // Downward closed.
      CHECK(is_achievable(h, {p.r1 * u(gen), p.r2 * u(gen)}, noise).achievable);
      CHECK(is_achievable(h, {p.r1, 0.0}, noise).achievable);
    }

    // Relabeling the links leaves the decision unchanged.
    const Noise swapped_noise{noise.sigma2_sq, noise.sigma1_sq};
    CHECK(is_achievable(h.swapped(), p.swapped(), swapped_noise).achievable == w.achievable);

    // Direct maximization agrees with bisection on the oracle, and the swap
    // of roles gives the same boundary.
    const double r1 = u(gen) * su1;
    const auto r2 = max_r2_given_r1(h, r1, noise);
    REQUIRE(r2.has_value());
    CHECK(std::abs(*r2 - max_r2_by_bisection(h, r1, noise)) <= 1e-6);
    const auto back = max_r1_given_r2(h, *r2, noise);
    REQUIRE(back.has_value());
    // On flat boundary stretches the inverse lands at the far end.
    CHECK(*back >= r1 - 1e-6);
    CHECK(*max_r2_given_r1(h, *back, noise) >= *r2 - 1e-6);
    if (*back < su1 - 1e-6) CHECK(*max_r2_given_r1(h, *back + 1e-4, noise) < *r2);
  }
  CHECK(achievable > 50);
  CHECK(achievable < 250);
}

TEST_CASE("oracle agrees with a beamformer-grid search") {
  // n = 2: w = s (cos t, sin t e^{i phi}); the grid search is sound (a hit is
  // a real witness), so it may only miss points near the boundary.
  std::mt19937_64 gen(8);
  struct Tx { double s, i; };
  auto sweep = [](const CVector& own, const CVector& cross) {
    std::vector<Tx> out;
    for (int a = 0; a <= 40; ++a)
      for (int b = 0; b < 40; ++b)
        for (int c = 1; c <= 10; ++c) {
          const double t = M_PI / 2 * a / 40, phi = 2 * M_PI * b / 40, s = c / 10.0;
          const CVector w = s * vec2(std::cos(t), std::polar(std::sin(t), phi));
          out.push_back({std::norm(own.dot(w)), std::norm(cross.dot(w))});
        }
    return out;
  };
  for (int t = 0; t < 40; ++t) {
    const auto h = test::gaussian_channel(gen, 2);
    const Noise noise{0.5, 0.5};
    auto t1 = sweep(h.h11, h.h12), t2 = sweep(h.h22, h.h21);
    // For TX2 candidates sorted by interference caused at RX1, keep the best
    // own power among those causing at most a given interference.
    std::sort(t2.begin(), t2.end(), [](const Tx& x, const Tx& y) { return x.i < y.i; });
    std::vector<double> best(t2.size());
    for (std::size_t k = 0; k < t2.size(); ++k)
      best[k] = std::max(k ? best[k - 1] : 0.0, t2[k].s);

    for (int k = 0; k < 5; ++k) {
      const RatePoint p{0.8 * su_rate(h, Link::one, noise) * (k + 1) / 5.0,
                        0.5 * su_rate(h, Link::two, noise) * (5 - k) / 5.0};
      const double g1 = sinr_target(p.r1), g2 = sinr_target(p.r2);
      bool hit = false;
      for (const auto& x : t1) {
        const double budget = x.s / g1 - noise.sigma1_sq;  // max interference at RX1
        if (budget < 0) continue;
        auto it = std::upper_bound(t2.begin(), t2.end(), budget,
                                   [](double v, const Tx& y) { return v < y.i; });
        if (it == t2.begin()) continue;
        if (best[static_cast<std::size_t>(it - t2.begin()) - 1] >=
            g2 * (x.i + noise.sigma2_sq)) {
          hit = true;
          break;
        }
      }
      const auto oracle = is_achievable(h, p, noise);
      if (hit) CHECK(oracle.achievable);
      if (!oracle.achievable) CHECK_FALSE(hit);
      if (oracle.achievable && oracle.power_margin > 0.05) CHECK(hit);
    }
  }
}

TEST_CASE("beamformer and covariance validation") {
  CHECK_THROWS_AS(Beamformer(vec2(1, 1)), Error);
  CHECK_NOTHROW(Beamformer(vec2(1, 0)));
  CMatrix psi = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(TransmitCovariance{psi}, Error);
  psi *= 0.5;
  CHECK_NOTHROW(TransmitCovariance{psi});
  psi(0, 1) = 0.3;
  CHECK_THROWS_AS(TransmitCovariance{psi}, Error);
  CHECK_THROWS_AS(RatePoint({-0.1, 0.0}).validate(), Error);
  CHECK_THROWS_AS(RatePoint({0.0, std::nan("")}).validate(), Error);
}
