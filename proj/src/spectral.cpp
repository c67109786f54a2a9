#include "gspkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "gspkit/error.hpp"
#include "gspkit/jacobi.hpp"

#include "lu.hpp"

namespace gspkit {

namespace {

void check_length(const SpectralDecomposition& d, Index len, const char* what) {
  if (len != d.size())
    throw DataError(std::string(what) + ": signal has length " + std::to_string(len) +
                    ", decomposition has size " + std::to_string(d.size()));
}

// Sort keys ascending; keys closer than tol form one group which is then
// ordered by original index.
std::vector<Index> grouped_order(const std::vector<double>& key, double tol) {
  std::vector<Index> idx(key.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return key[a] < key[b]; });
  std::size_t start = 0;
  for (std::size_t k = 1; k <= idx.size(); ++k) {
    if (k == idx.size() || key[idx[k]] - key[idx[k - 1]] > tol) {
      std::sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                idx.begin() + static_cast<std::ptrdiff_t>(k));
      start = k;
    }
  }
  return idx;
}

void assign_clusters(SpectralDecomposition& d) {
  const Index n = d.size();
  d.cluster.assign(static_cast<std::size_t>(n), -1);
  const double scale = std::max(1.0, d.cvalues.cwiseAbs().maxCoeff());
  Index next = 0;
  d.has_repeated = false;
  for (Index i = 0; i < n; ++i) {
    if (d.cluster[i] >= 0) continue;
    d.cluster[i] = next;
    for (Index j = i + 1; j < n; ++j) {
      if (d.cluster[j] < 0 && std::abs(d.cvalues(i) - d.cvalues(j)) < kClusterTolerance * scale) {
        d.cluster[j] = next;
        d.has_repeated = true;
      }
    }
    ++next;
  }
}

void promote(SpectralDecomposition& d) {
  d.cvalues = d.values.cast<Complex>();
  d.cvectors = d.vectors.cast<Complex>();
  d.cinverse = d.inverse.cast<Complex>();
}

SpectralDecomposition from_symmetric(const Gso& s) {
  SymmetricEigen eig = jacobi_eigen(s.matrix());
  SpectralDecomposition d;
  d.real = true;
  d.orthonormal = true;
  d.values = std::move(eig.values);
  d.vectors = std::move(eig.vectors);
  d.inverse = d.vectors.transpose();
  return d;
}

SpectralDecomposition from_directed_cycle(Index n) {
  SpectralDecomposition d;
  d.real = false;
  d.orthonormal = true;
  d.cvalues.resize(n);
  d.cvectors.resize(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    // Reduce k*m mod n before forming the angle so the phases are exact.
    d.cvalues(k) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / n);
    for (Index m = 0; m < n; ++m) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * m) % n) / n;
      d.cvectors(m, k) = std::polar(norm, angle);
    }
  }
  d.cinverse = d.cvectors.adjoint();
  return d;
}

SpectralDecomposition from_random_walk(const Gso& s) {
  const Graph* g = s.source();
  const Index n = s.size();
  Vector deg = Vector::Zero(n);
  for (const auto& e : g->edges()) {
    deg(e.src) += e.weight;
    deg(e.dst) += e.weight;
  }
  if ((deg.array() <= 0.0).any())
    throw DataError("random-walk Laplacian decomposition needs every vertex to have positive degree");
  // L_rw = D^-1/2 L_norm D^1/2, so V = D^-1/2 U and V^-1 = U^T D^1/2.
  const Gso norm = make_gso(*g, GsoVariant::normalized_laplacian);
  SymmetricEigen eig = jacobi_eigen(norm.matrix());
  const Vector sq = deg.cwiseSqrt();
  SpectralDecomposition d;
  d.real = true;
  d.orthonormal = false;
  d.values = std::move(eig.values);
  d.vectors = sq.cwiseInverse().asDiagonal() * eig.vectors;
  d.inverse = eig.vectors.transpose() * sq.asDiagonal();
  return d;
}

void finalize(SpectralDecomposition& d, const Gso& s) {
  d.variant = s.variant();
  d.source_fingerprint = fingerprint(s.matrix());
  if (d.real) promote(d);
  assign_clusters(d);
  d.ordering = frequency_order(d);
}

}  // namespace

std::uint64_t fingerprint(const Matrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const Index rows = m.rows(), cols = m.cols();
  mix(&rows, sizeof rows);
  mix(&cols, sizeof cols);
  mix(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
  return h;
}

void SpectralDecomposition::require_real(const char* what) const {
  if (!real) throw DataError(std::string(what) + " requires a real decomposition");
}

void SpectralDecomposition::require_match(const Matrix& s) const {
  if (fingerprint(s) != source_fingerprint)
    throw DataError("decomposition fingerprint does not match the shift operator");
}

SpectralDecomposition decompose(const Gso& s) {
  const Matrix& m = s.matrix();
  if (m.rows() == 0) throw DataError("cannot decompose an empty operator");
  SpectralDecomposition d;
  const double sym_tol = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
  if (is_directed_cycle_shift(m)) {
    // Checked first so that the 2-cycle, which is symmetric, also gets the DFT basis.
    d = from_directed_cycle(m.rows());
  } else if (s.is_symmetric(sym_tol)) {
    d = from_symmetric(s);
  } else if (s.variant() == GsoVariant::random_walk_laplacian && s.source() != nullptr) {
    d = from_random_walk(s);
  } else {
    throw DataError(
        "non-symmetric operator: supply its eigendecomposition (general non-symmetric "
        "eigensolvers are not provided)");
  }
  finalize(d, s);
  return d;
}

SpectralDecomposition decompose_supplied(const Gso& s, const CMatrix& vectors,
                                         const CVector& values) {
  const Index n = s.size();
  if (vectors.rows() != n || vectors.cols() != n || values.size() != n)
    throw DataError("supplied decomposition has the wrong dimensions");
  const CMatrix sc = s.matrix().cast<Complex>();
  const double scale = std::max(s.matrix().norm(), 1e-300);
  const double residual = (sc * vectors - vectors * values.asDiagonal()).norm() / scale;
  if (!(residual <= 1e-10))
    throw NumericalError("supplied eigenpairs do not satisfy S V = V diag(lambda): residual " +
                         std::to_string(residual));
  Eigen::PartialPivLU<CMatrix> lu(vectors);
  if (!(std::abs(lu.determinant()) > 0.0) || detail::reciprocal_condition(lu) < 1e-12)
    throw NumericalError("supplied eigenvector matrix is singular");

  SpectralDecomposition d;
  d.cvectors = vectors;
  d.cvalues = values;
  d.cinverse = lu.inverse();
  d.orthonormal = (vectors.adjoint() * vectors - CMatrix::Identity(n, n)).norm() <= 1e-10;
  const bool imag_free = vectors.imag().cwiseAbs().maxCoeff() == 0.0 &&
                         values.imag().cwiseAbs().maxCoeff() == 0.0;
  d.real = imag_free;
  d.variant = s.variant();
  d.source_fingerprint = fingerprint(s.matrix());
  if (d.real) {
    d.vectors = vectors.real();
    d.values = values.real();
    d.inverse = d.cinverse.real();
    promote(d);
  }
  assign_clusters(d);
  d.ordering = frequency_order(d);
  return d;
}

Vector gft(const SpectralDecomposition& d, const Vector& x) {
  d.require_real("gft");
  check_length(d, x.size(), "gft");
  return d.inverse * x;
}

Vector igft(const SpectralDecomposition& d, const Vector& xhat) {
  d.require_real("igft");
  check_length(d, xhat.size(), "igft");
  return d.vectors * xhat;
}

CVector gft_complex(const SpectralDecomposition& d, const CVector& x) {
  check_length(d, x.size(), "gft");
  return d.cinverse * x;
}

CVector igft_complex(const SpectralDecomposition& d, const CVector& xhat) {
  check_length(d, xhat.size(), "igft");
  return d.cvectors * xhat;
}

double edge_sum_variation(const Graph& g, const Vector& x) {
  if (x.size() != g.n_vertices()) throw DataError("signal length does not match the graph");
  double sum = 0.0;
  for (const auto& e : g.edges()) {
    const double diff = x(e.src) - x(e.dst);
    sum += e.weight * diff * diff;
  }
  return sum;
}

double total_variation(const Gso& s, const Vector& x, double spectral_radius) {
  const Matrix& m = s.matrix();
  if (x.size() != m.rows()) throw DataError("signal length does not match the operator");

  switch (s.variant()) {
    case GsoVariant::combinatorial_laplacian:
    case GsoVariant::normalized_laplacian: {
      const double quad = x.dot(m * x);
      if (s.source() != nullptr) {
        Vector y = x;
        if (s.variant() == GsoVariant::normalized_laplacian) {
          // Edge-sum form of the normalized Laplacian acts on D^-1/2 x.
          Vector deg = Vector::Zero(x.size());
          for (const auto& e : s.source()->edges()) {
            deg(e.src) += e.weight;
            deg(e.dst) += e.weight;
          }
          for (Index i = 0; i < x.size(); ++i) y(i) = deg(i) > 0.0 ? x(i) / std::sqrt(deg(i)) : 0.0;
        }
        const double edges = edge_sum_variation(*s.source(), y);
        if (std::abs(quad - edges) > 1e-10 * std::max(1.0, std::abs(quad)))
          throw NumericalError("quadratic form and edge-sum form disagree");
      }
      return std::max(quad, 0.0);
    }
    case GsoVariant::random_walk_laplacian:
      throw DataError("total variation is not defined for the random-walk Laplacian");
    case GsoVariant::adjacency:
    case GsoVariant::custom: {
      double radius = spectral_radius;
      if (radius <= 0.0) {
        if (s.is_symmetric(1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))) {
          radius = jacobi_eigen(m).values.cwiseAbs().maxCoeff();
        } else if (is_directed_cycle_shift(m)) {
          radius = 1.0;
        } else {
          throw DataError("total variation of a non-symmetric operator needs its spectral radius");
        }
      }
      if (radius <= 0.0) throw NumericalError("operator has zero spectral radius");
      return (x - m * x / radius).squaredNorm();
    }
  }
  throw DataError("unsupported operator variant");
}

std::vector<Index> frequency_order(const SpectralDecomposition& d) {
  const Index n = d.size();
  std::vector<double> key(static_cast<std::size_t>(n));
  const double scale = std::max(1.0, d.cvalues.cwiseAbs().maxCoeff());
  if (is_laplacian(d.variant)) {
    for (Index i = 0; i < n; ++i) key[i] = d.cvalues(i).real();
  } else {
    // ||v - S v / |lambda_max| ||^2 = |1 - lambda / |lambda_max||^2 ||v||^2
    const double radius = d.cvalues.cwiseAbs().maxCoeff();
    for (Index i = 0; i < n; ++i) {
      const Complex gain = radius > 0.0 ? 1.0 - d.cvalues(i) / radius : Complex{1.0};
      key[i] = std::norm(gain) * d.cvectors.col(i).squaredNorm();
    }
  }
  return grouped_order(key, kClusterTolerance * scale);
}

}  // namespace gspkit
