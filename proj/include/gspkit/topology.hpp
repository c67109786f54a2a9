#pragma once

#include <vector>

#include "gspkit/graph.hpp"
#include "gspkit/types.hpp"

namespace gspkit {

struct LearnDiagnostics {
  int iterations = 0;
  bool converged = false;
  double row_sum_residual = 0.0;     // max |(S 1)_i| for Laplacians
  double max_off_diagonal = 0.0;     // largest off-diagonal entry (<= 0 for Laplacians)
  double trace_residual = 0.0;       // |trace(S) - target| for Laplacians
  double constraint_residual = 0.0;  // affine-constraint residual for templates
};

struct LearnedGraph {
  Gso gso;
  Graph graph;  // undirected support of the learned operator with its weights
  std::vector<double> objective_trace;
  LearnDiagnostics diagnostics;
};

struct SmoothLaplacianOptions {
  double beta = 1.0;
  double trace = 0.0;  // 0 selects N
  int max_iters = 2000;
  double tol = 1e-8;
};

// Minimises trace(X^T L X) + beta ||L||_F^2 over Laplacians with
// trace(L) = options.trace, by projected gradient on the nonnegative edge
// weights (projection onto the scaled simplex) with halving backtracking from
// step 1. Throws NumericalError when every signal is constant.
LearnedGraph learn_smooth_laplacian(const SignalMatrix& xs, const SmoothLaplacianOptions& options);

// Edge (i, j) with weight |corr(row_i, row_j)| when that exceeds tau;
// zero-variance rows stay isolated.
Graph correlation_graph(const SignalMatrix& xs, double tau);

// P = ((1/M) X X^T + eps I)^-1; edge (i, j) with weight |P_ij| when that
// exceeds tau. Throws NumericalError when the regularized covariance is singular.
Graph precision_graph(const SignalMatrix& xs, double ridge, double tau);

struct SpectralTemplateOptions {
  int max_iters = 5000;
  // Singular values of the constraint system below rank_tol * sigma_max are
  // treated as zero when forming the feasible affine set.
  double rank_tol = 1e-10;
  // Maximum constraint residual accepted for the feasible set.
  double feasibility_tol = 1e-8;
};

// Finds eigenvalues mu minimising ||V diag(mu) V^T||_1 subject to a zero
// diagonal and a unit first-row sum, by projected subgradient descent.
// Throws DataError if V is not orthonormal and NumericalError if the
// constraints cannot be met.
LearnedGraph spectral_template_adjacency(const Matrix& eigenvectors,
                                         const SpectralTemplateOptions& options = {});

struct SupportScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Undirected edge-support agreement between two graphs on the same vertices.
SupportScore support_f1(const Graph& truth, const Graph& estimate);
// Support of |S_ij| > threshold (i < j) against a reference graph.
SupportScore support_f1(const Graph& truth, const Matrix& s, double threshold);

}  // namespace gspkit
