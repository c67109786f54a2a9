#include "gspkit/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "gspkit/error.hpp"

namespace gspkit {

namespace {

struct Rotation {
  Index p = 0;
  Index q = 0;
  double c = 1.0;
  double s = 0.0;
  bool active = false;
};

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

// Rotation annihilating a(p, q); inactive when the entry is negligible.
Rotation make_rotation(const Matrix& a, Index p, Index q, double floor) {
  Rotation r{p, q};
  const double apq = a(p, q);
  const double app = a(p, p), aqq = a(q, q);
  if (std::abs(apq) <= floor ||
      std::abs(apq) <= 1e-18 * std::sqrt(std::abs(app) * std::abs(aqq)))
    return r;
  const double theta = (aqq - app) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  r.c = 1.0 / std::sqrt(t * t + 1.0);
  r.s = t * r.c;
  r.active = true;
  return r;
}

void rotate_columns(Matrix& m, const Rotation& r) {
  for (Index k = 0; k < m.rows(); ++k) {
    const double mp = m(k, r.p), mq = m(k, r.q);
    m(k, r.p) = r.c * mp - r.s * mq;
    m(k, r.q) = r.s * mp + r.c * mq;
  }
}

void rotate_rows(Matrix& m, const Rotation& r) {
  for (Index k = 0; k < m.cols(); ++k) {
    const double mp = m(r.p, k), mq = m(r.q, k);
    m(r.p, k) = r.c * mp - r.s * mq;
    m(r.q, k) = r.s * mp + r.c * mq;
  }
}

void check_input(const Matrix& a) {
  if (a.rows() != a.cols()) throw DataError("eigensolver input must be square");
  if (!a.allFinite()) throw NumericalError("eigensolver input has non-finite entries");
}

// Off-diagonal target: relative to the Frobenius norm, with an absolute floor
// for the zero matrix.
double convergence_floor(const Matrix& a) {
  return std::max(a.norm(), 1e-300) * 1e-17;
}

SymmetricEigen finish(Matrix& a, Matrix& v, int sweeps) {
  SymmetricEigen out;
  out.values = a.diagonal();
  out.vectors = std::move(v);
  out.sweeps = sweeps;
  canonicalize(out.values, out.vectors);
  return out;
}

}  // namespace

void canonicalize(Vector& values, Matrix& vectors) {
  const Index n = values.size();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](Index i, Index j) { return values(i) < values(j); });
  Vector sorted_values(n);
  Matrix sorted_vectors(vectors.rows(), n);
  for (Index k = 0; k < n; ++k) {
    sorted_values(k) = values(perm[k]);
    sorted_vectors.col(k) = vectors.col(perm[k]);
  }
  for (Index k = 0; k < n; ++k) {
    auto col = sorted_vectors.col(k);
    const double peak = col.cwiseAbs().maxCoeff();
    Index pivot = 0;
    while (std::abs(col(pivot)) < peak - 1e-12 * std::max(peak, 1.0)) ++pivot;
    if (col(pivot) < 0.0) col = -col;
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

SymmetricEigen jacobi_eigen_serial(const Matrix& input, int max_sweeps) {
  check_input(input);
  const Index n = input.rows();
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double floor = convergence_floor(a);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= floor) return finish(a, v, sweep);
    bool rotated = false;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Rotation r = make_rotation(a, p, q, floor / static_cast<double>(n));
        if (!r.active) continue;
        rotated = true;
        rotate_columns(a, r);
        rotate_rows(a, r);
        a(p, q) = a(q, p) = 0.0;
        rotate_columns(v, r);
      }
    }
    if (!rotated) return finish(a, v, sweep + 1);
  }
  if (off_diagonal_norm(a) <= floor * 1e3) return finish(a, v, max_sweeps);
  throw NumericalError("Jacobi eigensolver did not converge");
}

SymmetricEigen jacobi_eigen(const Matrix& input, int max_sweeps) {
  check_input(input);
  const Index n = input.rows();
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double floor = convergence_floor(a);

  // Round-robin schedule over an even number of slots; slot n (odd n) is a bye.
  const Index slots = n + (n % 2);
  std::vector<Index> order(static_cast<std::size_t>(slots));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<Rotation> round(static_cast<std::size_t>(slots / 2));
  const bool parallel = n >= 64;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= floor) return finish(a, v, sweep);
    bool rotated = false;
    for (Index r = 0; r + 1 < slots; ++r) {
      const Index pairs = slots / 2;
      for (Index k = 0; k < pairs; ++k) {
        Index p = order[k], q = order[slots - 1 - k];
        if (p > q) std::swap(p, q);
        round[k] = (q >= n) ? Rotation{} : make_rotation(a, p, q, floor / static_cast<double>(n));
        rotated = rotated || round[k].active;
      }
      // Rotations in one round touch disjoint index pairs, so the column and
      // row passes can each run across pairs concurrently.
#pragma omp parallel for schedule(static) if (parallel)
      for (Index k = 0; k < pairs; ++k)
        if (round[k].active) {
          rotate_columns(a, round[k]);
          rotate_columns(v, round[k]);
        }
#pragma omp parallel for schedule(static) if (parallel)
      for (Index k = 0; k < pairs; ++k)
        if (round[k].active) rotate_rows(a, round[k]);
      for (Index k = 0; k < pairs; ++k)
        if (round[k].active) a(round[k].p, round[k].q) = a(round[k].q, round[k].p) = 0.0;
      std::rotate(order.begin() + 1, order.end() - 1, order.end());
    }
    if (!rotated) return finish(a, v, sweep + 1);
  }
  if (off_diagonal_norm(a) <= floor * 1e3) return finish(a, v, max_sweeps);
  throw NumericalError("Jacobi eigensolver did not converge");
}

}  // namespace gspkit
