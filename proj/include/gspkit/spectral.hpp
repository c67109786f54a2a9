#pragma once

#include <cstdint>
#include <vector>

#include "gspkit/graph.hpp"
#include "gspkit/types.hpp"

namespace gspkit {

// 64-bit FNV-1a hash of the matrix dimensions and entry bytes.
std::uint64_t fingerprint(const Matrix& m);

// Eigendecomposition S = V diag(lambda) V^-1 of a shift operator.
//
// Real decompositions (symmetric operators, random-walk Laplacians) fill
// vectors/values/inverse; the complex members always hold the same data
// promoted to complex, so code that only needs the complex view can ignore
// `real`.
struct SpectralDecomposition {
  bool real = true;
  bool orthonormal = true;
  GsoVariant variant = GsoVariant::custom;
  std::uint64_t source_fingerprint = 0;

  Vector values;
  Matrix vectors;
  Matrix inverse;

  CVector cvalues;
  CMatrix cvectors;
  CMatrix cinverse;

  // Permutation of eigen indices by increasing variation.
  std::vector<Index> ordering;
  // Cluster id per eigen index; indices whose eigenvalues lie within the
  // repeated-eigenvalue tolerance share an id.
  std::vector<Index> cluster;
  bool has_repeated = false;

  Index size() const { return cvalues.size(); }
  void require_real(const char* what) const;
  void require_match(const Matrix& s) const;
};

// Tolerance below which neighbouring eigenvalues count as repeated.
inline constexpr double kClusterTolerance = 1e-8;

// Symmetric operators use the Jacobi eigensolver; directed-cycle adjacencies
// get their analytic DFT basis; random-walk Laplacians are reduced to the
// normalized Laplacian by similarity. Anything else throws DataError.
SpectralDecomposition decompose(const Gso& s);

// Diagonalizable operator with a caller-supplied eigenbasis. Throws
// NumericalError if S V != V diag(lambda) to 1e-10 or V is singular.
SpectralDecomposition decompose_supplied(const Gso& s, const CMatrix& vectors,
                                         const CVector& values);

Vector gft(const SpectralDecomposition& d, const Vector& x);
Vector igft(const SpectralDecomposition& d, const Vector& xhat);
CVector gft_complex(const SpectralDecomposition& d, const CVector& x);
CVector igft_complex(const SpectralDecomposition& d, const CVector& xhat);

// Laplacian variants: x^T L x, cross-checked against the edge-sum form.
// Adjacency/custom operators: ||x - S x / |lambda_max| ||^2 with the given
// spectral radius, or one computed from S when radius <= 0.
double total_variation(const Gso& s, const Vector& x, double spectral_radius = 0.0);

// Edge-sum form sum_{(i,j)} w_ij (x_i - x_j)^2 over the source graph's
// undirected edges; combinatorial Laplacian only.
double edge_sum_variation(const Graph& g, const Vector& x);

std::vector<Index> frequency_order(const SpectralDecomposition& d);

}  // namespace gspkit
