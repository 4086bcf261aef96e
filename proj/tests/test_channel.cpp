// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "miso/channel.hpp"
#include "miso/rng.hpp"
#include "support.hpp"

using namespace miso;

namespace {

CMatrix real_diag(std::initializer_list<double> d) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                            static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

ChannelStatistics identity_stats(Eigen::Index n) {
  ChannelStatistics s;
  s.n = n;
  s.q11 = s.q12 = s.q21 = s.q22 = CMatrix::Identity(n, n);
  s.noise = {0.5, 0.5};
  return s;
}

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("counter rng is a pure function of (seed, stream, index)") {
  CounterRng a(42, Stream::channel, 7), b(42, Stream::channel, 7);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  CounterRng c(42, Stream::coin, 7), d(42, Stream::channel, 8);
  CounterRng e(42, Stream::channel, 7);
  CHECK(c() != e());
  CHECK(d() != CounterRng(42, Stream::channel, 7)());
}

TEST_CASE("uniform and complex normal moments") {
  double sum = 0, re2 = 0, im2 = 0, reim = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    CounterRng rng(3, Stream::coin, static_cast<std::uint64_t>(k));
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    const auto z = rng.complex_normal();
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    reim += z.real() * z.imag();
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(reim / n) < 0.01);
}

TEST_CASE("factor_covariance examples") {
  const CMatrix id = CMatrix::Identity(2, 2);
  CHECK((factor_covariance(id) - id).norm() < 1e-15);
  const CMatrix l = factor_covariance(real_diag({4, 1}));
  CHECK((l - real_diag({2, 1})).norm() < 1e-15);

  std::mt19937_64 gen(11);
  for (int t = 0; t < 200; ++t) {
    const CMatrix q = test::random_covariance(gen, 2, 3.0);
    const CMatrix f = factor_covariance(q);
    CHECK((f * f.adjoint() - q).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(f(0, 1)) == 0.0);
  }
}

TEST_CASE("factor_covariance handles rank-deficient input") {
  CVector v(2);
  v << std::complex<double>(1, 1), std::complex<double>(0.5, -2);
  const CMatrix q = v * v.adjoint();
  const CMatrix l = factor_covariance(q);
  CHECK((l * l.adjoint() - q).cwiseAbs().maxCoeff() < 1e-9);

  const CMatrix z = CMatrix::Zero(2, 2);
  CHECK(factor_covariance(z).norm() == 0.0);
  CHECK((factor_covariance(real_diag({0, 3})) - real_diag({0, std::sqrt(3.0)})).norm() < 1e-15);
}

TEST_CASE("validate_statistics rejects bad inputs and names the matrix") {
  auto s = identity_stats(2);
  CHECK_NOTHROW(validate_statistics(s));

  auto bad = s;
  bad.q12(0, 1) = {0.3, 0.0};  // not Hermitian
  CHECK(error_of([&] { validate_statistics(bad); }).find("Q12 is not Hermitian") == 0);

  bad = s;
  bad.q21 = real_diag({1, -0.5});
  CHECK(error_of([&] { validate_statistics(bad); }).find("Q21 is not positive semidefinite") == 0);

  bad = s;
  bad.q22 = CMatrix::Identity(3, 3);
  CHECK(error_of([&] { validate_statistics(bad); }).find("Q22") == 0);

  bad = s;
  bad.noise.sigma2_sq = 0.0;
  CHECK(error_of([&] { validate_statistics(bad); }).find("sigma2_sq") != std::string::npos);

  bad = s;
  bad.n = 0;
  CHECK_THROWS_AS(validate_statistics(bad), Error);

  CHECK_THROWS_AS(factor_covariance(real_diag({1, -1})), Error);
}

TEST_CASE("channel realization validates shapes") {
  CVector a = CVector::Ones(2), b = CVector::Ones(3);
  CHECK_THROWS_AS(ChannelRealization(a, a, a, b), Error);
  CHECK_THROWS_AS(ChannelRealization(CVector(), CVector(), CVector(), CVector()), Error);
  CVector nan = a;
  nan[1] = {std::nan(""), 0.0};
  CHECK_THROWS_AS(ChannelRealization(a, nan, a, a), Error);
  const ChannelRealization h(a, 2.0 * a, 3.0 * a, 4.0 * a);
  const auto s = h.swapped();
  CHECK(s.h11 == h.h22);
  CHECK(s.h12 == h.h21);
  CHECK(s.h21 == h.h12);
  CHECK(s.h22 == h.h11);
  CHECK(h.own(Link::two) == h.h22);
  CHECK(h.cross(Link::two) == h.h21);
}

TEST_CASE("explicit list passes through in order") {
  std::mt19937_64 gen(5);
  std::vector<ChannelRealization> list;
  for (int i = 0; i < 3; ++i) list.push_back(test::gaussian_channel(gen, 2));
  const auto src = SampleSource::from_list(list, {1.0, 1.0});
  const auto out = sample_batch(src);
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out[i].h11 == list[i].h11);
    CHECK(out[i].h22 == list[i].h22);
  }
  CHECK_FALSE(src.is_statistical());
  CHECK_THROWS_AS(src.at(3), Error);
  CHECK_THROWS_AS(SampleSource::from_list({}, {1.0, 1.0}), Error);
}

TEST_CASE("prefix stability and reproducibility") {
  const auto src = SampleSource::from_statistics(identity_stats(2), 99, 1000);
  const auto a = sample_batch(src.with_count(100));
  const auto b = sample_batch(src);
  const auto c = sample_batch(src);
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(a[k].h11 == b[k].h11);
    CHECK(a[k].h21 == b[k].h21);
  }
  for (std::size_t k = 0; k < b.size(); ++k) REQUIRE(b[k].h12 == c[k].h12);
  const auto other = sample_batch(src.with_seed(100).with_count(1));
  CHECK(other[0].h11 != b[0].h11);
}

TEST_CASE("serial and parallel batches agree bit for bit") {
  const auto src = SampleSource::from_statistics(identity_stats(3), 7, 5000);
  const auto s = sample_batch(src, Exec::serial_reference());
  const auto p = sample_batch(src, Exec{4});
  REQUIRE(s.size() == p.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    REQUIRE(s[k].h11 == p[k].h11);
    REQUIRE(s[k].h12 == p[k].h12);
    REQUIRE(s[k].h21 == p[k].h21);
    REQUIRE(s[k].h22 == p[k].h22);
  }
}

TEST_CASE("second moments match the covariances") {
  std::mt19937_64 gen(21);
  ChannelStatistics st;
  st.n = 2;
  st.q11 = CMatrix::Identity(2, 2);
  st.q12 = test::random_covariance(gen, 2, 2.0);
  st.q21 = real_diag({1.5, 0.25});
  CVector v(2);
  v << 1.0, std::complex<double>(0, 1);
  st.q22 = v * v.adjoint();  // rank one
  st.noise = {1.0, 1.0};
  const std::size_t n = 200000;
  const auto batch = sample_batch(SampleSource::from_statistics(st, 1234, n), Exec{0});

  CMatrix e11 = CMatrix::Zero(2, 2), e12 = e11, e21 = e11, e22 = e11, x = e11;
  for (const auto& h : batch) {
    e11 += h.h11 * h.h11.adjoint();
    e12 += h.h12 * h.h12.adjoint();
    e21 += h.h21 * h.h21.adjoint();
    e22 += h.h22 * h.h22.adjoint();
    x += h.h11 * h.h22.adjoint();
  }
  const double dn = static_cast<double>(n);
  CHECK((e11 / dn - st.q11).cwiseAbs().maxCoeff() < 0.02);
  CHECK((e12 / dn - st.q12).cwiseAbs().maxCoeff() < 0.02);
  CHECK((e21 / dn - st.q21).cwiseAbs().maxCoeff() < 0.02);
  CHECK((e22 / dn - st.q22).cwiseAbs().maxCoeff() < 0.02);
  CHECK((x / dn).cwiseAbs().maxCoeff() < 4.0 / std::sqrt(dn));
}

TEST_CASE("identity covariance: empirical covariance within 0.02") {
  const std::size_t n = 200000;
  const auto batch =
      sample_batch(SampleSource::from_statistics(identity_stats(2), 2, n), Exec{0});
  CMatrix e = CMatrix::Zero(2, 2);
  for (const auto& h : batch) e += h.h21 * h.h21.adjoint();
  CHECK((e / static_cast<double>(n) - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.02);
}
