#include "gspkit/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gspkit/error.hpp"

#include "lu.hpp"

namespace gspkit {

namespace {

Matrix select_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

double smallest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().minCoeff();
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DataError("alpha must be positive and finite");
}

Vector solve_spd_like(const Matrix& a, const Vector& b, const char* what) {
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(detail::reciprocal_condition(lu) * 1e12 >= 1.0))
    throw NumericalError(std::string(what) + ": system matrix is singular (condition estimate " +
                         std::to_string(detail::reciprocal_condition(lu) > 0.0 ? 1.0 / detail::reciprocal_condition(lu) : INFINITY) + ")");
  return lu.solve(b);
}

}  // namespace

SamplingSet::SamplingSet(Index n, std::vector<Index> indices) : n_(n), indices_(std::move(indices)) {
  if (n_ < 1) throw DataError("sampling set needs a positive ambient size");
  if (indices_.empty()) throw DataError("sampling set must not be empty");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= n_)
      throw DataError("sample index " + std::to_string(indices_[i]) + " out of range");
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw DataError("sample indices must be strictly increasing");
  }
}

Matrix SamplingSet::selection() const {
  Matrix phi = Matrix::Zero(size(), n_);
  for (Index r = 0; r < size(); ++r) phi(r, indices_[r]) = 1.0;
  return phi;
}

BandlimitedModel::BandlimitedModel(const SpectralDecomposition& d, Index bandwidth) {
  d.require_real("bandlimited model");
  if (bandwidth < 1 || bandwidth > d.size())
    throw DataError("bandwidth must lie in [1, N]");
  basis_.resize(d.size(), bandwidth);
  for (Index k = 0; k < bandwidth; ++k) basis_.col(k) = d.vectors.col(d.ordering[k]);
  fingerprint_ = d.source_fingerprint;
}

Vector sample(const Vector& x, const SamplingSet& m) {
  if (x.size() != m.ambient_size()) throw DataError("signal length does not match the sampling set");
  Vector out(m.size());
  for (Index r = 0; r < m.size(); ++r) out(r) = x(m.indices()[r]);
  return out;
}

Vector zero_pad(const Vector& xm, const SamplingSet& m) {
  if (xm.size() != m.size()) throw DataError("sample vector length does not match the sampling set");
  Vector out = Vector::Zero(m.ambient_size());
  for (Index r = 0; r < m.size(); ++r) out(m.indices()[r]) = xm(r);
  return out;
}

double sampling_quality(const BandlimitedModel& b, const SamplingSet& m) {
  if (m.ambient_size() != b.ambient_size()) throw DataError("sampling set size mismatch");
  return smallest_singular_value(select_rows(b.basis(), m.indices()));
}

Vector interpolate_bandlimited(const BandlimitedModel& b, const SamplingSet& m, const Vector& xm) {
  if (m.ambient_size() != b.ambient_size()) throw DataError("sampling set size mismatch");
  if (xm.size() != m.size()) throw DataError("sample vector length does not match the sampling set");
  if (m.size() < b.bandwidth())
    throw DataError("need at least K = " + std::to_string(b.bandwidth()) + " samples, got " +
                    std::to_string(m.size()));
  const Matrix sub = select_rows(b.basis(), m.indices());
  Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double smin = sv.minCoeff();
  if (!(smin > 1e-10))
    throw NumericalError("Phi_M V_K is rank deficient: smallest singular value " +
                         std::to_string(smin));
  // Pseudoinverse with cutoff 1e-10 * sigma_max (inactive once full rank).
  const double cutoff = 1e-10 * sv.maxCoeff();
  Vector ut = svd.matrixU().transpose() * xm;
  for (Index i = 0; i < sv.size(); ++i) ut(i) = sv(i) > cutoff ? ut(i) / sv(i) : 0.0;
  return b.basis() * (svd.matrixV() * ut);
}

Vector interpolate_regularized(const Matrix& h, double alpha, const SamplingSet& m, const Vector& xm) {
  check_alpha(alpha);
  const Index n = m.ambient_size();
  if (h.rows() != n || h.cols() != n) throw DataError("filter matrix size mismatch");
  if (xm.size() != m.size()) throw DataError("sample vector length does not match the sampling set");
  const Matrix penalty = Matrix::Identity(n, n) - h;
  Matrix system = alpha * penalty.transpose() * penalty;
  for (Index idx : m.indices()) system(idx, idx) += 1.0;
  return solve_spd_like(system, zero_pad(xm, m), "regularized interpolation");
}

Vector interpolate_regularized(const Gso& s, const GraphFilter& f, double alpha,
                               const SamplingSet& m, const Vector& xm,
                               const SpectralDecomposition* d) {
  return interpolate_regularized(filter_matrix(s, f, d), alpha, m, xm);
}

SamplingSelection select_sampling_set(const BandlimitedModel& b, Index m_size) {
  const Index n = b.ambient_size();
  if (m_size < b.bandwidth() || m_size > n)
    throw DataError("sampling set size must lie in [K, N]");
  std::vector<Index> chosen;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  double best = 0.0;
  for (Index step = 0; step < m_size; ++step) {
    Index pick = -1;
    best = -1.0;
    for (Index v = 0; v < n; ++v) {
      if (used[v]) continue;
      std::vector<Index> trial = chosen;
      trial.push_back(v);
      const double q = smallest_singular_value(select_rows(b.basis(), trial));
      if (pick < 0 || q > best + 1e-12 * std::max(1.0, best)) {
        pick = v;
        best = q;
      }
    }
    used[pick] = true;
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());
  SamplingSet set(n, chosen);
  const double quality = sampling_quality(b, set);
  return {std::move(set), quality};
}

SslResult ssl_labels(const Matrix& penalty, double alpha, const SamplingSet& labeled,
                     const Vector& labels) {
  check_alpha(alpha);
  const Index n = labeled.ambient_size();
  if (penalty.rows() != n || penalty.cols() != n) throw DataError("penalty operator size mismatch");
  if (labels.size() != labeled.size()) throw DataError("label count does not match the labeled set");
  // Gradient of x^T P x is (P + P^T) x; symmetric P gives the usual 2 P x.
  Matrix system = alpha * 0.5 * (penalty + penalty.transpose());
  for (Index idx : labeled.indices()) system(idx, idx) += 1.0;
  SslResult out;
  out.scores = solve_spd_like(system, zero_pad(labels, labeled), "semi-supervised labeling");
  out.classes.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.classes[i] = out.scores(i) >= 0.0 ? 1 : -1;
  return out;
}

SslResult ssl_labels(const Gso& s, double alpha, const SamplingSet& labeled, const Vector& labels) {
  return ssl_labels(s.matrix(), alpha, labeled, labels);
}

SourceEstimate identify_sources(const Matrix& h, const Vector& x, Index k) {
  const Index n = h.rows();
  if (h.cols() != n) throw DataError("filter matrix must be square");
  if (x.size() != n) throw DataError("signal length does not match the filter matrix");
  if (k < 0 || k > n) throw DataError("sparsity k must lie in [0, N]");
  const Vector norms = h.colwise().norm();
  for (Index j = 0; j < n; ++j)
    if (!(norms(j) > 0.0)) throw DataError("filter matrix has a zero column");

  SourceEstimate est;
  const Matrix normalized = h * norms.cwiseInverse().asDiagonal();
  const Matrix gram = (normalized.transpose() * normalized).cwiseAbs();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) est.mutual_coherence = std::max(est.mutual_coherence, gram(i, j));

  Vector residual = x;
  est.residual_trace.push_back(residual.norm());
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  Vector coeffs;
  for (Index step = 0; step < k; ++step) {
    const Vector corr = (normalized.transpose() * residual).cwiseAbs();
    Index pick = -1;
    for (Index j = 0; j < n; ++j)
      if (!used[j] && (pick < 0 || corr(j) > corr(pick))) pick = j;
    used[pick] = true;
    est.support.push_back(pick);
    Matrix atoms(n, static_cast<Index>(est.support.size()));
    for (std::size_t c = 0; c < est.support.size(); ++c)
      atoms.col(static_cast<Index>(c)) = h.col(est.support[c]);
    coeffs = atoms.colPivHouseholderQr().solve(x);
    residual = x - atoms * coeffs;
    est.residual_trace.push_back(residual.norm());
  }
  est.values = k > 0 ? coeffs : Vector();
  est.residual = residual.norm();
  return est;
}

}  // namespace gspkit
