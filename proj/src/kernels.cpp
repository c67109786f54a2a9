#include "gspkit/kernels.hpp"

#include <algorithm>
#include <cassert>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gspkit::kernels {

namespace {

// Below this many stored entries the parallel kernels run on one thread.
constexpr Index kParallelNnz = 4096;

template <bool Parallel>
void spmv_impl(const CsrMatrix& s, const double* x, double* y) {
  const Index n = s.n;
#pragma omp parallel for schedule(static) if (Parallel && s.nnz() >= kParallelNnz)
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) acc += s.values[k] * x[s.col_idx[k]];
    y[i] = acc;
  }
}

template <bool Parallel>
void poly_impl(const CsrMatrix& s, std::span<const double> taps, const double* x, double* y) {
  const Index n = s.n;
  const Index degree = static_cast<Index>(taps.size()) - 1;
  if (degree < 0) {
    std::fill(y, y + n, 0.0);
    return;
  }
  std::vector<double> acc(x, x + n), tmp(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) acc[i] = taps[degree] * x[i];
  for (Index l = degree - 1; l >= 0; --l) {
    spmv_impl<Parallel>(s, acc.data(), tmp.data());
    const double h = taps[l];
#pragma omp parallel for schedule(static) if (Parallel && s.nnz() >= kParallelNnz)
    for (Index i = 0; i < n; ++i) acc[i] = tmp[i] + h * x[i];
  }
  std::copy(acc.begin(), acc.end(), y);
}

template <bool Parallel>
void chebyshev_impl(const CsrMatrix& s, std::span<const double> coeffs, double lo, double hi,
                    const double* x, double* y) {
  const Index n = s.n;
  if (coeffs.empty()) {
    std::fill(y, y + n, 0.0);
    return;
  }
  const double scale = 2.0 / (hi - lo);
  const double shift = (hi + lo) / (hi - lo);
  std::vector<double> prev(x, x + n), cur(static_cast<std::size_t>(n)),
      next(static_cast<std::size_t>(n)), sx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) y[i] = 0.5 * coeffs[0] * x[i];
  if (coeffs.size() == 1) return;

  // T_1 = S~ x
  spmv_impl<Parallel>(s, x, sx.data());
  for (Index i = 0; i < n; ++i) {
    cur[i] = scale * sx[i] - shift * x[i];
    y[i] += coeffs[1] * cur[i];
  }
  for (std::size_t k = 2; k < coeffs.size(); ++k) {
    spmv_impl<Parallel>(s, cur.data(), sx.data());
    const double c = coeffs[k];
#pragma omp parallel for schedule(static) if (Parallel && s.nnz() >= kParallelNnz)
    for (Index i = 0; i < n; ++i) {
      next[i] = 2.0 * (scale * sx[i] - shift * cur[i]) - prev[i];
      y[i] += c * next[i];
    }
    std::swap(prev, cur);
    std::swap(cur, next);
  }
}

}  // namespace

CsrMatrix CsrMatrix::from_dense(const Matrix& m) {
  assert(m.rows() == m.cols());
  CsrMatrix c;
  c.n = m.rows();
  c.row_ptr.reserve(static_cast<std::size_t>(c.n) + 1);
  c.row_ptr.push_back(0);
  for (Index i = 0; i < c.n; ++i) {
    for (Index j = 0; j < c.n; ++j) {
      if (m(i, j) != 0.0) {
        c.col_idx.push_back(j);
        c.values.push_back(m(i, j));
      }
    }
    c.row_ptr.push_back(static_cast<Index>(c.values.size()));
  }
  return c;
}

void set_max_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n > 0 ? n : omp_get_num_procs());
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void spmv_serial(const CsrMatrix& s, std::span<const double> x, std::span<double> y) {
  spmv_impl<false>(s, x.data(), y.data());
}

void spmv(const CsrMatrix& s, std::span<const double> x, std::span<double> y) {
  spmv_impl<true>(s, x.data(), y.data());
}

void poly_apply_serial(const CsrMatrix& s, std::span<const double> taps,
                       std::span<const double> x, std::span<double> y) {
  poly_impl<false>(s, taps, x.data(), y.data());
}

void poly_apply(const CsrMatrix& s, std::span<const double> taps, std::span<const double> x,
                std::span<double> y) {
  poly_impl<true>(s, taps, x.data(), y.data());
}

Matrix poly_apply_batch_serial(const CsrMatrix& s, std::span<const double> taps,
                               const Matrix& x) {
  Matrix y(x.rows(), x.cols());
  for (Index c = 0; c < x.cols(); ++c)
    poly_impl<false>(s, taps, x.col(c).data(), y.col(c).data());
  return y;
}

Matrix poly_apply_batch(const CsrMatrix& s, std::span<const double> taps, const Matrix& x) {
  Matrix y(x.rows(), x.cols());
  const Index cols = x.cols();
#pragma omp parallel for schedule(dynamic) if (cols > 1)
  for (Index c = 0; c < cols; ++c) poly_impl<false>(s, taps, x.col(c).data(), y.col(c).data());
  return y;
}

void chebyshev_apply_serial(const CsrMatrix& s, std::span<const double> coeffs, double lo,
                            double hi, std::span<const double> x, std::span<double> y) {
  chebyshev_impl<false>(s, coeffs, lo, hi, x.data(), y.data());
}

void chebyshev_apply(const CsrMatrix& s, std::span<const double> coeffs, double lo, double hi,
                     std::span<const double> x, std::span<double> y) {
  chebyshev_impl<true>(s, coeffs, lo, hi, x.data(), y.data());
}

}  // namespace gspkit::kernels
