#pragma once

#include <cstdint>

#include "gspkit/graph.hpp"
#include "gspkit/spectral.hpp"
#include "gspkit/types.hpp"

namespace gspkit {

// Power spectral density indexed by eigenvalue position.
struct PsdEstimate {
  Vector values;
  Index sample_count = 0;
};

struct CovarianceEstimate {
  Matrix matrix;
  Index sample_count = 0;
};

// C = (1/M) X X^T; with remove_mean the row means are subtracted first.
CovarianceEstimate sample_covariance(const SignalMatrix& xs, bool remove_mean = false);

// Columns x = V diag(sqrt(p)) V^T z with z ~ N(0, I) drawn from
// CounterRng(seed, column). Throws DataError on a negative PSD entry.
SignalMatrix synthesize_stationary(const SpectralDecomposition& d, const Vector& psd, Index m,
                                   std::uint64_t seed);

// V diag(p) V^T.
Matrix population_covariance(const SpectralDecomposition& d, const Vector& psd);

// ||C S - S C||_F / (||C||_F ||S||_F); zero iff C and S commute.
double stationarity_score(const Matrix& c, const Gso& s);

// p_l = (1/M) sum_m |[V^-1 x_m]_l|^2, averaged over repeated eigenvalue clusters.
PsdEstimate periodogram(const SpectralDecomposition& d, const SignalMatrix& xs);
// Also checks that d belongs to s.
PsdEstimate periodogram(const Gso& s, const SpectralDecomposition& d, const SignalMatrix& xs);

// Per-frequency gain p / (p + sigma2) with 0/0 -> 0.
Vector wiener_gain(const Vector& psd, double noise_variance);
Vector wiener_denoise(const SpectralDecomposition& d, const Vector& psd, double noise_variance,
                      const Vector& y);

}  // namespace gspkit
