#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gspkit/graph.hpp"
#include "gspkit/spectral.hpp"
#include "gspkit/types.hpp"

namespace gspkit {

enum class FilterForm { taps, response, rational };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// H(S) as taps sum_l h_l S^l, as a frequency response diag(h^) in a given
// eigenbasis, or as the inverse of a polynomial (sum_l a_l S^l)^-1.
//
// A taps filter with an interval holds Chebyshev coefficients for that
// spectral interval instead of monomial taps.
struct GraphFilter {
  FilterForm form = FilterForm::taps;
  std::vector<double> coefficients;
  std::uint64_t fingerprint = 0;  // response form: source operator of the basis
  std::optional<Interval> interval;

  static GraphFilter from_taps(std::vector<double> h);
  static GraphFilter from_response(const SpectralDecomposition& d, std::vector<double> response);
  static GraphFilter from_denominator(std::vector<double> a);
  static GraphFilter from_chebyshev(std::vector<double> coeffs, Interval interval);

  bool is_chebyshev() const { return form == FilterForm::taps && interval.has_value(); }
};

using SpectralKernel = std::function<double(double)>;

SpectralKernel heat_kernel(double tau);
// 1 on [0, cutoff], 0 above.
SpectralKernel rectangular_kernel(double cutoff);

// y = sum_l h_l S^l x by Horner multiply-accumulate over the sparse structure.
Vector apply_polynomial(const Gso& s, std::span<const double> taps, const Vector& x);
SignalMatrix apply_polynomial(const Gso& s, std::span<const double> taps, const SignalMatrix& x);

// y = V diag(h^) V^-1 x. The filter overload checks the basis fingerprint.
Vector apply_response(const SpectralDecomposition& d, std::span<const double> response,
                      const Vector& x);
Vector apply_response(const SpectralDecomposition& d, const GraphFilter& f, const Vector& x);

Vector apply_kernel(const SpectralDecomposition& d, const SpectralKernel& kernel, const Vector& x);
std::vector<double> sample_kernel(const SpectralDecomposition& d, const SpectralKernel& kernel);

// Solves (sum_l a_l S^l) y = x. Throws NumericalError when the operator's
// condition estimate exceeds 1e12 or the residual exceeds 1e-8 ||x||.
Vector apply_iir(const Gso& s, std::span<const double> a, const Vector& x);

std::vector<double> taps_to_response(const SpectralDecomposition& d, std::span<const double> h);
// Interpolates the response on the distinct eigenvalues; the result has
// (#distinct eigenvalues) taps. Throws DataError when the response is not
// constant on a repeated eigenvalue cluster and NumericalError when the
// Vandermonde system is too ill conditioned to solve.
std::vector<double> response_to_taps(const SpectralDecomposition& d,
                                     std::span<const double> response);

// Series connection. Taps convolve (and are reduced below N taps when a
// decomposition is given); responses multiply pointwise; denominators
// convolve. Mixed taps/response needs the decomposition.
GraphFilter cascade(const GraphFilter& h1, const GraphFilter& h2,
                    const SpectralDecomposition* d = nullptr);

// Chebyshev coefficients c_0..c_order of the kernel on [lo, hi], taken from
// the kernel's values at the order + 1 Chebyshev nodes.
std::vector<double> chebyshev_fit(const SpectralKernel& kernel, int order, Interval interval);
Vector chebyshev_apply(const Gso& s, std::span<const double> coeffs, Interval interval,
                       const Vector& x);
// Same, after checking that the decomposition's spectrum lies in the interval.
Vector chebyshev_apply(const Gso& s, const SpectralDecomposition& d,
                       std::span<const double> coeffs, Interval interval, const Vector& x);

// [lo, hi] enclosing the spectrum by Gershgorin discs; lo is 0 for Laplacians.
Interval gershgorin_interval(const Gso& s);

std::vector<Vector> kernel_filterbank(const SpectralDecomposition& d,
                                      const std::vector<SpectralKernel>& kernels, const Vector& x);
// (min, max) over eigenvalues of sum_j |H_j(lambda)|^2.
std::pair<double, double> filterbank_frame_bounds(const SpectralDecomposition& d,
                                                  const std::vector<SpectralKernel>& kernels);

// Dense H(S). Response filters need the decomposition they were built on.
Matrix filter_matrix(const Gso& s, const GraphFilter& f, const SpectralDecomposition* d = nullptr);

// Applies any filter form.
Vector apply_filter(const Gso& s, const GraphFilter& f, const Vector& x,
                    const SpectralDecomposition* d = nullptr);

}  // namespace gspkit
