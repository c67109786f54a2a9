#pragma once

#include <cstdint>
#include <vector>

#include "gspkit/filters.hpp"
#include "gspkit/spectral.hpp"
#include "gspkit/types.hpp"

namespace gspkit {

// Strictly increasing vertex subset M of {0..n-1}.
class SamplingSet {
 public:
  // Throws DataError on empty, unsorted, duplicate or out-of-range indices.
  SamplingSet(Index n, std::vector<Index> indices);

  Index ambient_size() const { return n_; }
  Index size() const { return static_cast<Index>(indices_.size()); }
  const std::vector<Index>& indices() const { return indices_; }
  // Phi_M: the |M| x n selection matrix.
  Matrix selection() const;

 private:
  Index n_;
  std::vector<Index> indices_;
};

// Span of the first K frequency-ordered eigenvectors.
class BandlimitedModel {
 public:
  BandlimitedModel(const SpectralDecomposition& d, Index bandwidth);

  Index bandwidth() const { return basis_.cols(); }
  Index ambient_size() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }  // V_K, N x K
  std::uint64_t source_fingerprint() const { return fingerprint_; }

 private:
  Matrix basis_;
  std::uint64_t fingerprint_ = 0;
};

Vector sample(const Vector& x, const SamplingSet& m);
// Phi_M^T x_M.
Vector zero_pad(const Vector& xm, const SamplingSet& m);

// Smallest singular value of Phi_M V_K (over min(|M|, K) values).
double sampling_quality(const BandlimitedModel& b, const SamplingSet& m);

// x* = V_K (Phi_M V_K)^+ x_M. Throws DataError when |M| < K and
// NumericalError (naming the offending singular value) when Phi_M V_K is not
// full column rank.
Vector interpolate_bandlimited(const BandlimitedModel& b, const SamplingSet& m, const Vector& xm);

// argmin ||x_M - Phi_M x||^2 + alpha ||(I - H) x||^2 through its normal
// equations (Phi^T Phi + alpha (I - H)^T (I - H)) x = Phi^T x_M.
Vector interpolate_regularized(const Matrix& h, double alpha, const SamplingSet& m, const Vector& xm);
Vector interpolate_regularized(const Gso& s, const GraphFilter& f, double alpha,
                               const SamplingSet& m, const Vector& xm,
                               const SpectralDecomposition* d = nullptr);

struct SamplingSelection {
  SamplingSet set;
  double sigma_min = 0.0;
};

// Greedy: each step adds the vertex maximising sigma_min(Phi_M V_K), lowest
// index on ties.
SamplingSelection select_sampling_set(const BandlimitedModel& b, Index m_size);

struct SslResult {
  Vector scores;
  std::vector<int> classes;  // sign(scores), sign(0) = +1
};

// argmin ||labels - Phi_M x||^2 + alpha x^T P x for a penalty operator P.
SslResult ssl_labels(const Matrix& penalty, double alpha, const SamplingSet& labeled,
                     const Vector& labels);
// Penalty H(S) = S, the classical Laplacian regularizer when S is a Laplacian.
SslResult ssl_labels(const Gso& s, double alpha, const SamplingSet& labeled, const Vector& labels);

struct SourceEstimate {
  std::vector<Index> support;  // in selection order
  Vector values;               // aligned with support
  double residual = 0.0;
  std::vector<double> residual_trace;  // residual norm after each selection, starting at ||x||
  double mutual_coherence = 0.0;
};

// Orthogonal matching pursuit over the columns of H: k greedy atoms with a
// least-squares refit after each one.
SourceEstimate identify_sources(const Matrix& h, const Vector& x, Index k);

}  // namespace gspkit
