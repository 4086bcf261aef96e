// SPDX-License-Identifier: Apache-2.0

#include "miso/channel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "miso/kernels.hpp"
#include "miso/rng.hpp"

namespace miso {

namespace {

bool all_finite(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  return true;
}

}  // namespace

void Noise::validate() const {
  if (!(sigma1_sq > 0.0) || !std::isfinite(sigma1_sq))
    throw Error("noise variance sigma1_sq must be positive and finite");
  if (!(sigma2_sq > 0.0) || !std::isfinite(sigma2_sq))
    throw Error("noise variance sigma2_sq must be positive and finite");
}

ChannelRealization::ChannelRealization(CVector h11_, CVector h12_,
                                       CVector h21_, CVector h22_)
    : h11(std::move(h11_)),
      h12(std::move(h12_)),
      h21(std::move(h21_)),
      h22(std::move(h22_)) {
  const auto n = h11.size();
  if (n < 1) throw Error("channel vectors must have at least one antenna");
  if (h12.size() != n || h21.size() != n || h22.size() != n)
    throw Error("channel vectors h11, h12, h21, h22 must share one length");
  if (!all_finite(h11) || !all_finite(h12) || !all_finite(h21) ||
      !all_finite(h22))
    throw Error("channel vectors must have finite entries");
}

ChannelRealization ChannelRealization::swapped() const {
  ChannelRealization out;
  out.h11 = h22;
  out.h22 = h11;
  out.h12 = h21;
  out.h21 = h12;
  return out;
}

void validate_covariance(const CMatrix& q, const std::string& name) {
  if (q.rows() != q.cols() || q.rows() < 1)
    throw Error(name + " must be a non-empty square matrix");
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = 0; j < q.cols(); ++j)
      if (!std::isfinite(q(i, j).real()) || !std::isfinite(q(i, j).imag()))
        throw Error(name + " has a non-finite entry");
  const double asym = (q - q.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol) {
    std::ostringstream os;
    os << name << " is not Hermitian (max |Q - Q^H| = " << asym << ")";
    throw Error(os.str());
  }
  const CMatrix sym = 0.5 * (q + q.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -kEigenTol) {
    std::ostringstream os;
    os << name << " is not positive semidefinite (min eigenvalue " << min_eig
       << ")";
    throw Error(os.str());
  }
}

ChannelStatistics validate_statistics(ChannelStatistics stats) {
  if (stats.n < 1) throw Error("antenna count n must be at least 1");
  const std::pair<const CMatrix*, const char*> mats[] = {
      {&stats.q11, "Q11"}, {&stats.q12, "Q12"},
      {&stats.q21, "Q21"}, {&stats.q22, "Q22"}};
  for (const auto& [q, name] : mats) {
    if (q->rows() != stats.n || q->cols() != stats.n)
      throw Error(std::string(name) + " must be n x n");
    validate_covariance(*q, name);
  }
  stats.noise.validate();
  return stats;
}

CMatrix factor_covariance(const CMatrix& q) {
  validate_covariance(q, "covariance");
  const Eigen::Index n = q.rows();
  const double scale = std::max(1.0, q.diagonal().real().cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale * static_cast<double>(n);
  CMatrix l = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    std::complex<double> acc = q(j, j);
    for (Eigen::Index k = 0; k < j; ++k) acc -= l(j, k) * std::conj(l(j, k));
    const double pivot = acc.real();
    if (pivot < -std::max(tol, kEigenTol))
      throw Error("covariance is indefinite (negative Cholesky pivot)");
    if (pivot <= tol) continue;  // rank-deficient direction: column stays zero
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      std::complex<double> s = q(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / root;
    }
  }
  return l;
}

SampleSource SampleSource::from_statistics(ChannelStatistics stats,
                                           std::uint64_t seed,
                                           std::size_t count) {
  auto model = std::make_shared<Model>();
  model->stats = validate_statistics(std::move(stats));
  model->l11 = factor_covariance(model->stats.q11);
  model->l12 = factor_covariance(model->stats.q12);
  model->l21 = factor_covariance(model->stats.q21);
  model->l22 = factor_covariance(model->stats.q22);
  SampleSource src;
  src.noise_ = model->stats.noise;
  src.antennas_ = model->stats.n;
  src.model_ = std::move(model);
  src.seed_ = seed;
  src.count_ = count;
  return src;
}

SampleSource SampleSource::from_list(std::vector<ChannelRealization> list,
                                     Noise noise) {
  noise.validate();
  if (list.empty()) throw Error("explicit sample list must not be empty");
  const auto n = list.front().antennas();
  for (const auto& h : list) {
    // Re-run the constructor checks on entries that may have been mutated.
    ChannelRealization checked(h.h11, h.h12, h.h21, h.h22);
    if (checked.antennas() != n)
      throw Error("explicit sample list mixes antenna counts");
  }
  SampleSource src;
  src.noise_ = noise;
  src.antennas_ = n;
  src.count_ = list.size();
  src.list_ =
      std::make_shared<const std::vector<ChannelRealization>>(std::move(list));
  return src;
}

ChannelRealization SampleSource::at(std::size_t k) const {
  if (list_) {
    if (k >= list_->size()) throw Error("sample index out of range");
    return (*list_)[k];
  }
  const Eigen::Index n = antennas_;
  CounterRng rng(seed_, Stream::channel, k);
  auto draw = [&](const CMatrix& l) {
    CVector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.complex_normal();
    return CVector(l * z);
  };
  ChannelRealization h;
  h.h11 = draw(model_->l11);
  h.h12 = draw(model_->l12);
  h.h21 = draw(model_->l21);
  h.h22 = draw(model_->l22);
  return h;
}

SampleSource SampleSource::with_count(std::size_t count) const {
  if (list_) throw Error("cannot resize an explicit sample list");
  SampleSource out = *this;
  out.count_ = count;
  return out;
}

SampleSource SampleSource::with_seed(std::uint64_t seed) const {
  if (list_) throw Error("cannot reseed an explicit sample list");
  SampleSource out = *this;
  out.seed_ = seed;
  return out;
}

std::vector<ChannelRealization> sample_batch(const SampleSource& source,
                                             Exec exec) {
  if (exec.serial()) return kernels::draw_serial(source);
  return kernels::draw_parallel(source, exec.resolved());
}

}  // namespace miso
