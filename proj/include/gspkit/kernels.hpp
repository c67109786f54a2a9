#pragma once

// Data-parallel kernels. Every OpenMP kernel has a *_serial twin that is the
// reference implementation used by the tests and the benchmark; both produce
// bitwise-identical results because each output entry is reduced in the
// same order regardless of the thread count.

#include <span>
#include <vector>

#include "gspkit/types.hpp"

namespace gspkit::kernels {

struct CsrMatrix {
  Index n = 0;
  std::vector<Index> row_ptr;
  std::vector<Index> col_idx;
  std::vector<double> values;

  static CsrMatrix from_dense(const Matrix& m);
  Index nnz() const { return static_cast<Index>(values.size()); }
};

// Cap on the OpenMP team size; n <= 0 restores the runtime default.
void set_max_threads(int n);
int max_threads();

// y = S x.
void spmv_serial(const CsrMatrix& s, std::span<const double> x, std::span<double> y);
void spmv(const CsrMatrix& s, std::span<const double> x, std::span<double> y);

// y = sum_l taps[l] S^l x, Horner form: one SpMV per tap, S^l never formed.
void poly_apply_serial(const CsrMatrix& s, std::span<const double> taps,
                       std::span<const double> x, std::span<double> y);
void poly_apply(const CsrMatrix& s, std::span<const double> taps,
                std::span<const double> x, std::span<double> y);

// Column-wise poly_apply over an N x M signal matrix; the parallel version
// splits across columns.
Matrix poly_apply_batch_serial(const CsrMatrix& s, std::span<const double> taps,
                               const Matrix& x);
Matrix poly_apply_batch(const CsrMatrix& s, std::span<const double> taps, const Matrix& x);

// y = c0/2 x + sum_{k>=1} c_k T_k(S~) x with S~ = (2 S - (hi + lo) I) / (hi - lo),
// evaluated by the three-term recurrence.
void chebyshev_apply_serial(const CsrMatrix& s, std::span<const double> coeffs, double lo,
                            double hi, std::span<const double> x, std::span<double> y);
void chebyshev_apply(const CsrMatrix& s, std::span<const double> coeffs, double lo,
                     double hi, std::span<const double> x, std::span<double> y);

}  // namespace gspkit::kernels
