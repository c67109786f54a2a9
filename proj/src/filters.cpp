#include "gspkit/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gspkit/error.hpp"
#include "gspkit/kernels.hpp"

#include "lu.hpp"

namespace gspkit {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double c : v)
    if (!std::isfinite(c)) throw DataError(std::string(what) + " has non-finite entries");
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// sum_l c_l S^l as a dense matrix (Horner).
Matrix dense_polynomial(const Matrix& s, std::span<const double> c) {
  const Index n = s.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (std::size_t l = c.size(); l-- > 0;) {
    acc = s * acc;
    acc.diagonal().array() += c[l];
  }
  return acc;
}

void check_signal(const Gso& s, Index len) {
  if (len != s.size())
    throw DataError("signal length " + std::to_string(len) + " does not match operator size " +
                    std::to_string(s.size()));
}

}  // namespace

GraphFilter GraphFilter::from_taps(std::vector<double> h) {
  if (h.empty()) throw DataError("filter needs at least one tap");
  check_finite(h, "filter taps");
  return GraphFilter{FilterForm::taps, std::move(h), 0, std::nullopt};
}

GraphFilter GraphFilter::from_response(const SpectralDecomposition& d, std::vector<double> response) {
  if (static_cast<Index>(response.size()) != d.size())
    throw DataError("frequency response length does not match the decomposition");
  check_finite(response, "frequency response");
  return GraphFilter{FilterForm::response, std::move(response), d.source_fingerprint, std::nullopt};
}

GraphFilter GraphFilter::from_denominator(std::vector<double> a) {
  if (a.empty()) throw DataError("rational filter needs at least one coefficient");
  check_finite(a, "rational filter coefficients");
  return GraphFilter{FilterForm::rational, std::move(a), 0, std::nullopt};
}

GraphFilter GraphFilter::from_chebyshev(std::vector<double> coeffs, Interval interval) {
  if (coeffs.empty()) throw DataError("Chebyshev filter needs at least one coefficient");
  if (!(interval.hi > interval.lo)) throw DataError("Chebyshev interval needs hi > lo");
  check_finite(coeffs, "Chebyshev coefficients");
  return GraphFilter{FilterForm::taps, std::move(coeffs), 0, interval};
}

SpectralKernel heat_kernel(double tau) {
  return [tau](double lambda) { return std::exp(-tau * lambda); };
}

SpectralKernel rectangular_kernel(double cutoff) {
  return [cutoff](double lambda) { return lambda <= cutoff ? 1.0 : 0.0; };
}

Vector apply_polynomial(const Gso& s, std::span<const double> taps, const Vector& x) {
  check_signal(s, x.size());
  if (taps.empty()) throw DataError("filter needs at least one tap");
  check_finite(taps, "filter taps");
  const auto csr = kernels::CsrMatrix::from_dense(s.matrix());
  Vector y(x.size());
  kernels::poly_apply(csr, taps, {x.data(), static_cast<std::size_t>(x.size())},
                      {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

SignalMatrix apply_polynomial(const Gso& s, std::span<const double> taps, const SignalMatrix& x) {
  check_signal(s, x.rows());
  if (taps.empty()) throw DataError("filter needs at least one tap");
  check_finite(taps, "filter taps");
  const auto csr = kernels::CsrMatrix::from_dense(s.matrix());
  return kernels::poly_apply_batch(csr, taps, x);
}

Vector apply_response(const SpectralDecomposition& d, std::span<const double> response,
                      const Vector& x) {
  if (static_cast<Index>(response.size()) != d.size())
    throw DataError("frequency response length does not match the decomposition");
  if (x.size() != d.size()) throw DataError("signal length does not match the decomposition");
  const Eigen::Map<const Vector> h(response.data(), static_cast<Index>(response.size()));
  if (d.real) return d.vectors * (h.asDiagonal() * (d.inverse * x));
  const CVector y = d.cvectors * (h.cast<Complex>().asDiagonal() * (d.cinverse * x.cast<Complex>()));
  if (y.imag().norm() > 1e-9 * std::max(1.0, y.norm()))
    throw NumericalError("response is not conjugate-symmetric: filtered signal is complex");
  return y.real();
}

Vector apply_response(const SpectralDecomposition& d, const GraphFilter& f, const Vector& x) {
  if (f.form != FilterForm::response) throw DataError("filter is not in response form");
  if (f.fingerprint != d.source_fingerprint)
    throw DataError("frequency response was built for a different shift operator");
  return apply_response(d, f.coefficients, x);
}

std::vector<double> sample_kernel(const SpectralDecomposition& d, const SpectralKernel& kernel) {
  d.require_real("spectral kernel evaluation");
  std::vector<double> h(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) {
    h[i] = kernel(d.values(i));
    if (!std::isfinite(h[i]))
      throw DataError("kernel is not finite at eigenvalue " + std::to_string(d.values(i)));
  }
  return h;
}

Vector apply_kernel(const SpectralDecomposition& d, const SpectralKernel& kernel, const Vector& x) {
  return apply_response(d, sample_kernel(d, kernel), x);
}

Vector apply_iir(const Gso& s, std::span<const double> a, const Vector& x) {
  check_signal(s, x.size());
  if (a.empty()) throw DataError("rational filter needs at least one coefficient");
  check_finite(a, "rational filter coefficients");
  const Matrix op = dense_polynomial(s.matrix(), a);
  Eigen::PartialPivLU<Matrix> lu(op);
  const double rcond = detail::reciprocal_condition(lu);
  if (!(rcond * 1e12 >= 1.0))
    throw NumericalError("IIR operator is singular or ill conditioned (condition estimate " +
                         std::to_string(rcond > 0.0 ? 1.0 / rcond : INFINITY) + ")");
  Vector y = lu.solve(x);
  const double residual = (op * y - x).norm();
  if (residual > 1e-8 * x.norm())
    throw NumericalError("IIR solve residual " + std::to_string(residual) + " too large");
  return y;
}

std::vector<double> taps_to_response(const SpectralDecomposition& d, std::span<const double> h) {
  d.require_real("taps_to_response");
  if (h.empty()) throw DataError("filter needs at least one tap");
  std::vector<double> out(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) {
    double acc = 0.0;
    for (std::size_t l = h.size(); l-- > 0;) acc = acc * d.values(i) + h[l];
    out[i] = acc;
  }
  return out;
}

std::vector<double> response_to_taps(const SpectralDecomposition& d,
                                     std::span<const double> response) {
  d.require_real("response_to_taps");
  if (static_cast<Index>(response.size()) != d.size())
    throw DataError("frequency response length does not match the decomposition");

  const Index clusters = *std::max_element(d.cluster.begin(), d.cluster.end()) + 1;
  Vector nodes = Vector::Zero(clusters), targets = Vector::Zero(clusters);
  Vector counts = Vector::Zero(clusters);
  double peak = 1.0;
  for (double r : response) peak = std::max(peak, std::abs(r));
  std::vector<double> first(static_cast<std::size_t>(clusters), NAN);
  for (Index i = 0; i < d.size(); ++i) {
    const Index c = d.cluster[i];
    if (std::isnan(first[c])) {
      first[c] = response[i];
    } else if (std::abs(response[i] - first[c]) > kClusterTolerance * peak) {
      throw DataError("response differs within repeated eigenvalue cluster at index " +
                      std::to_string(i) + ": no polynomial realizes it");
    }
    nodes(c) += d.values(i);
    targets(c) += response[i];
    counts(c) += 1.0;
  }
  nodes.array() /= counts.array();
  targets.array() /= counts.array();

  Matrix vander(clusters, clusters);
  for (Index i = 0; i < clusters; ++i) {
    double p = 1.0;
    for (Index j = 0; j < clusters; ++j) {
      vander(i, j) = p;
      p *= nodes(i);
    }
  }
  Eigen::PartialPivLU<Matrix> lu(vander);
  const double rcond = detail::reciprocal_condition(lu);
  if (!std::isfinite(vander.norm()) || !(rcond > 1e-15))
    throw NumericalError("Vandermonde system is too ill conditioned (rcond " +
                         std::to_string(rcond) + ")");
  const Vector taps = lu.solve(targets);
  return {taps.data(), taps.data() + taps.size()};
}

GraphFilter cascade(const GraphFilter& h1, const GraphFilter& h2, const SpectralDecomposition* d) {
  if (h1.is_chebyshev() || h2.is_chebyshev())
    throw DataError("Chebyshev-form filters must be converted before cascading");

  if (h1.form == FilterForm::taps && h2.form == FilterForm::taps) {
    std::vector<double> taps = convolve(h1.coefficients, h2.coefficients);
    if (d != nullptr && static_cast<Index>(taps.size()) > d->size())
      taps = response_to_taps(*d, taps_to_response(*d, taps));
    return GraphFilter::from_taps(std::move(taps));
  }
  if (h1.form == FilterForm::rational && h2.form == FilterForm::rational)
    return GraphFilter::from_denominator(convolve(h1.coefficients, h2.coefficients));

  if (h1.form == FilterForm::rational || h2.form == FilterForm::rational)
    throw DataError("cannot cascade a rational filter with a non-rational one");

  // Remaining cases meet in the response domain.
  auto as_response = [&](const GraphFilter& f) -> std::vector<double> {
    if (f.form == FilterForm::response) return f.coefficients;
    if (d == nullptr) throw DataError("mixed taps/response cascade needs a decomposition");
    return taps_to_response(*d, f.coefficients);
  };
  const std::uint64_t fp1 = h1.form == FilterForm::response ? h1.fingerprint : 0;
  const std::uint64_t fp2 = h2.form == FilterForm::response ? h2.fingerprint : 0;
  if (fp1 != 0 && fp2 != 0 && fp1 != fp2)
    throw DataError("cascaded responses belong to different decompositions");
  if (d != nullptr && ((fp1 != 0 && fp1 != d->source_fingerprint) ||
                       (fp2 != 0 && fp2 != d->source_fingerprint)))
    throw DataError("cascaded response does not belong to the given decomposition");
  std::vector<double> r1 = as_response(h1), r2 = as_response(h2);
  if (r1.size() != r2.size()) throw DataError("cascaded responses have different lengths");
  for (std::size_t i = 0; i < r1.size(); ++i) r1[i] *= r2[i];
  GraphFilter out{FilterForm::response, std::move(r1), fp1 != 0 ? fp1 : fp2, std::nullopt};
  return out;
}

std::vector<double> chebyshev_fit(const SpectralKernel& kernel, int order, Interval interval) {
  if (order < 0) throw DataError("Chebyshev order must be nonnegative");
  if (!(interval.hi > interval.lo)) throw DataError("Chebyshev interval needs hi > lo");
  const int nodes = order + 1;
  const double half = 0.5 * (interval.hi - interval.lo);
  const double mid = 0.5 * (interval.hi + interval.lo);
  std::vector<double> values(static_cast<std::size_t>(nodes)), theta(values.size());
  for (int j = 0; j < nodes; ++j) {
    theta[j] = std::numbers::pi * (j + 0.5) / nodes;
    values[j] = kernel(mid + half * std::cos(theta[j]));
    if (!std::isfinite(values[j])) throw DataError("kernel is not finite on the interval");
  }
  std::vector<double> coeffs(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) acc += values[j] * std::cos(k * theta[j]);
    coeffs[k] = 2.0 * acc / nodes;
  }
  return coeffs;
}

Vector chebyshev_apply(const Gso& s, std::span<const double> coeffs, Interval interval,
                       const Vector& x) {
  check_signal(s, x.size());
  if (!(interval.hi > interval.lo)) throw DataError("Chebyshev interval needs hi > lo");
  const auto csr = kernels::CsrMatrix::from_dense(s.matrix());
  Vector y(x.size());
  kernels::chebyshev_apply(csr, coeffs, interval.lo, interval.hi,
                           {x.data(), static_cast<std::size_t>(x.size())},
                           {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

Vector chebyshev_apply(const Gso& s, const SpectralDecomposition& d,
                       std::span<const double> coeffs, Interval interval, const Vector& x) {
  d.require_real("chebyshev_apply");
  const double slack = 1e-10 * std::max(1.0, std::max(std::abs(interval.lo), std::abs(interval.hi)));
  if (d.values.minCoeff() < interval.lo - slack || d.values.maxCoeff() > interval.hi + slack)
    throw DataError("spectrum lies outside the Chebyshev interval");
  return chebyshev_apply(s, coeffs, interval, x);
}

Interval gershgorin_interval(const Gso& s) {
  const Matrix& m = s.matrix();
  double lo = INFINITY, hi = -INFINITY;
  for (Index i = 0; i < m.rows(); ++i) {
    const double radius = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
    lo = std::min(lo, m(i, i) - radius);
    hi = std::max(hi, m(i, i) + radius);
  }
  if (is_laplacian(s.variant())) lo = 0.0;
  if (!(hi > lo)) hi = lo + 1.0;
  return {lo, hi};
}

std::vector<Vector> kernel_filterbank(const SpectralDecomposition& d,
                                      const std::vector<SpectralKernel>& kernels, const Vector& x) {
  if (kernels.empty()) throw DataError("filterbank needs at least one kernel");
  std::vector<Vector> out;
  out.reserve(kernels.size());
  for (const auto& k : kernels) out.push_back(apply_kernel(d, k, x));
  return out;
}

std::pair<double, double> filterbank_frame_bounds(const SpectralDecomposition& d,
                                                  const std::vector<SpectralKernel>& kernels) {
  if (kernels.empty()) throw DataError("filterbank needs at least one kernel");
  Vector energy = Vector::Zero(d.size());
  for (const auto& k : kernels) {
    const auto h = sample_kernel(d, k);
    for (Index i = 0; i < d.size(); ++i) energy(i) += h[i] * h[i];
  }
  return {energy.minCoeff(), energy.maxCoeff()};
}

Matrix filter_matrix(const Gso& s, const GraphFilter& f, const SpectralDecomposition* d) {
  switch (f.form) {
    case FilterForm::taps: {
      if (!f.is_chebyshev()) return dense_polynomial(s.matrix(), f.coefficients);
      const Index n = s.size();
      Matrix out(n, n);
      for (Index j = 0; j < n; ++j)
        out.col(j) = chebyshev_apply(s, f.coefficients, *f.interval, Vector::Unit(n, j));
      return out;
    }
    case FilterForm::response: {
      if (d == nullptr) throw DataError("response-form filter needs its decomposition");
      d->require_match(s.matrix());
      if (f.fingerprint != d->source_fingerprint)
        throw DataError("frequency response was built for a different shift operator");
      const Eigen::Map<const Vector> h(f.coefficients.data(), static_cast<Index>(f.coefficients.size()));
      if (d->real) return d->vectors * h.asDiagonal() * d->inverse;
      const CMatrix m = d->cvectors * h.cast<Complex>().asDiagonal() * d->cinverse;
      if (m.imag().norm() > 1e-9 * std::max(1.0, m.norm()))
        throw NumericalError("response is not conjugate-symmetric: filter matrix is complex");
      return m.real();
    }
    case FilterForm::rational: {
      const Matrix op = dense_polynomial(s.matrix(), f.coefficients);
      Eigen::PartialPivLU<Matrix> lu(op);
      if (!(detail::reciprocal_condition(lu) * 1e12 >= 1.0))
        throw NumericalError("IIR operator is singular or ill conditioned");
      return lu.inverse();
    }
  }
  throw DataError("unknown filter form");
}

Vector apply_filter(const Gso& s, const GraphFilter& f, const Vector& x,
                    const SpectralDecomposition* d) {
  switch (f.form) {
    case FilterForm::taps:
      if (f.is_chebyshev()) return chebyshev_apply(s, f.coefficients, *f.interval, x);
      return apply_polynomial(s, f.coefficients, x);
    case FilterForm::response:
      if (d == nullptr) throw DataError("response-form filter needs its decomposition");
      d->require_match(s.matrix());
      return apply_response(*d, f, x);
    case FilterForm::rational:
      return apply_iir(s, f.coefficients, x);
  }
  throw DataError("unknown filter form");
}

}  // namespace gspkit
