#include "gspkit/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gspkit/error.hpp"
#include "gspkit/filters.hpp"
#include "gspkit/random.hpp"

namespace gspkit {

namespace {

void check_psd(const SpectralDecomposition& d, const Vector& psd) {
  if (psd.size() != d.size()) throw DataError("PSD length does not match the decomposition");
  for (Index i = 0; i < psd.size(); ++i)
    if (!(psd(i) >= 0.0) || !std::isfinite(psd(i)))
      throw DataError("PSD entry " + std::to_string(i) + " is negative or not finite");
}

}  // namespace

CovarianceEstimate sample_covariance(const SignalMatrix& xs, bool remove_mean) {
  if (xs.cols() < 1) throw DataError("covariance needs at least one signal");
  Matrix centered = xs;
  if (remove_mean) centered.colwise() -= xs.rowwise().mean();
  CovarianceEstimate c;
  c.sample_count = xs.cols();
  c.matrix = centered * centered.transpose() / static_cast<double>(xs.cols());
  c.matrix = 0.5 * (c.matrix + c.matrix.transpose());
  return c;
}

SignalMatrix synthesize_stationary(const SpectralDecomposition& d, const Vector& psd, Index m,
                                   std::uint64_t seed) {
  d.require_real("stationary synthesis");
  check_psd(d, psd);
  if (m < 1) throw DataError("synthesis needs at least one realization");
  const Index n = d.size();
  // Generator operator V diag(sqrt(p)) V^-1.
  const Matrix gen = d.vectors * psd.cwiseSqrt().asDiagonal() * d.inverse;
  SignalMatrix out(n, m);
#pragma omp parallel for schedule(static)
  for (Index col = 0; col < m; ++col) {
    CounterRng rng(seed, static_cast<std::uint64_t>(col));
    Vector z(n);
    for (Index i = 0; i < n; ++i) z(i) = rng.normal();
    out.col(col).noalias() = gen * z;
  }
  return out;
}

Matrix population_covariance(const SpectralDecomposition& d, const Vector& psd) {
  d.require_real("population covariance");
  check_psd(d, psd);
  const Matrix g = d.vectors * psd.cwiseSqrt().asDiagonal() * d.inverse;
  return g * g.transpose();
}

double stationarity_score(const Matrix& c, const Gso& s) {
  const Matrix& sm = s.matrix();
  if (c.rows() != sm.rows() || c.cols() != sm.cols()) throw DataError("covariance size mismatch");
  if (!s.is_symmetric(1e-12 * std::max(1.0, sm.cwiseAbs().maxCoeff())))
    throw DataError("stationarity score needs a symmetric shift operator");
  const double denom = c.norm() * sm.norm();
  if (denom == 0.0) return 0.0;
  return (c * sm - sm * c).norm() / denom;
}

PsdEstimate periodogram(const SpectralDecomposition& d, const SignalMatrix& xs) {
  if (xs.rows() != d.size()) throw DataError("signal length does not match the decomposition");
  if (xs.cols() < 1) throw DataError("periodogram needs at least one signal");
  const CMatrix coeffs = d.cinverse * xs.cast<Complex>();
  Vector p = coeffs.cwiseAbs2().rowwise().sum() / static_cast<double>(xs.cols());
  if (d.has_repeated) {
    const Index clusters = *std::max_element(d.cluster.begin(), d.cluster.end()) + 1;
    Vector sum = Vector::Zero(clusters), count = Vector::Zero(clusters);
    for (Index i = 0; i < d.size(); ++i) {
      sum(d.cluster[i]) += p(i);
      count(d.cluster[i]) += 1.0;
    }
    for (Index i = 0; i < d.size(); ++i) p(i) = sum(d.cluster[i]) / count(d.cluster[i]);
  }
  return {std::move(p), xs.cols()};
}

PsdEstimate periodogram(const Gso& s, const SpectralDecomposition& d, const SignalMatrix& xs) {
  d.require_match(s.matrix());
  return periodogram(d, xs);
}

Vector wiener_gain(const Vector& psd, double noise_variance) {
  if (!(noise_variance >= 0.0)) throw DataError("noise variance must be nonnegative");
  Vector g(psd.size());
  for (Index i = 0; i < psd.size(); ++i) {
    if (psd(i) < 0.0) throw DataError("PSD entries must be nonnegative");
    const double denom = psd(i) + noise_variance;
    g(i) = denom > 0.0 ? psd(i) / denom : 0.0;
  }
  return g;
}

Vector wiener_denoise(const SpectralDecomposition& d, const Vector& psd, double noise_variance,
                      const Vector& y) {
  if (psd.size() != d.size()) throw DataError("PSD length does not match the decomposition");
  const Vector g = wiener_gain(psd, noise_variance);
  return apply_response(d, {g.data(), static_cast<std::size_t>(g.size())}, y);
}

}  // namespace gspkit
