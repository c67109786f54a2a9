#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gspkit/graph.hpp"
#include "gspkit/spectral.hpp"
#include "gspkit/types.hpp"

namespace gspkit {

// Time-vertex data is an N x T matrix, one graph signal per column. Its
// vectorization stacks the rows: vec(X)[n * T + t] = X(n, t), i.e. each
// vertex's time series is contiguous. This is the ordering under which the
// product operators below are S_g (x) S_t and the joint transform is
// V_g^-1 (x) V_t^-1.
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Index n, Index t);

enum class ProductKind { kronecker, cartesian, strong };
std::string_view to_string(ProductKind k);
ProductKind parse_product_kind(std::string_view name);

struct ProductGso {
  Matrix matrix;  // NT x NT
  ProductKind kind = ProductKind::cartesian;
  Matrix graph_factor;
  Matrix time_factor;
};

// kronecker: S_g (x) S_t; cartesian: S_g (x) I_T + I_N (x) S_t; strong: both summed.
ProductGso product_gso(const Gso& graph, const Gso& time, ProductKind kind);

Matrix kronecker(const Matrix& a, const Matrix& b);
CMatrix kronecker(const CMatrix& a, const CMatrix& b);

// X^ = V_g^-1 X (V_t^-1)^T.
CMatrix joint_gft(const SpectralDecomposition& graph, const SpectralDecomposition& time,
                  const Matrix& x);
CMatrix joint_igft(const SpectralDecomposition& graph, const SpectralDecomposition& time,
                   const CMatrix& xhat);

enum class VarMode { graph_var, structural_var };
std::string_view to_string(VarMode m);
VarMode parse_var_mode(std::string_view name);

struct VarModel {
  VarMode mode = VarMode::graph_var;
  Index order = 0;  // P
  // graph-var: P x (L + 1); row p - 1 holds h_{p,0..L}.
  Matrix taps;
  // structural-var: A_0 (zero diagonal), A_1..A_P.
  std::vector<Matrix> lags;

  double residual = 0.0;
  double condition = 0.0;            // graph-var design conditioning
  double spectral_radius = 0.0;      // structural-var companion-matrix diagnostic
  std::vector<double> objective_trace;
  int iterations = 0;
};

// Least-squares fit of x_t ~ sum_p sum_l h_{p,l} S^l x_{t-p} over t = P..T-1.
// With causal set, taps with l > p are fixed at zero. Throws NumericalError
// on a rank-deficient design, reporting the nullspace dimension.
VarModel fit_graph_var(const Matrix& xs, const Gso& s, Index p_order, Index l_order,
                       bool causal = false);

struct StructuralVarOptions {
  double lambda = 0.0;
  int max_iters = 20000;
  double tol = 1e-12;
};

// Proximal gradient (ISTA) on sum_t ||x_t - A_0 x_t - sum_p A_p x_{t-p}||^2
// + lambda sum_p ||A_p||_1 with diag(A_0) held at zero. Stops when the
// proximal-gradient mapping falls below tol relative to the gradient at zero.
VarModel fit_structural_var(const Matrix& xs, Index p_order, const StructuralVarOptions& options);

// Dense A_p = sum_l h_{p,l} S^l for a graph-var model, A_0 = 0.
VarModel to_structural(const VarModel& graph_var, const Gso& s);

// One-step-ahead prediction; history holds at least P columns, oldest first,
// so its last column is x_{t-1}. graph-var needs s.
Vector predict_var(const VarModel& model, const Gso* s, const Matrix& history);

}  // namespace gspkit
