#include "gspkit/timevertex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gspkit/error.hpp"
#include "gspkit/kernels.hpp"

#include "lu.hpp"

namespace gspkit {

namespace {

template <typename M>
M kron_impl(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void check_history(const Matrix& xs, Index p_order) {
  if (p_order < 1) throw DataError("VAR order must be at least 1");
  if (xs.cols() <= p_order) throw DataError("VAR fit needs T > P");
}

double soft(double x, double t) {
  return x > t ? x - t : (x < -t ? x + t : 0.0);
}

}  // namespace

Vector vec(const Matrix& x) {
  Vector v(x.size());
  for (Index n = 0; n < x.rows(); ++n)
    for (Index t = 0; t < x.cols(); ++t) v(n * x.cols() + t) = x(n, t);
  return v;
}

Matrix unvec(const Vector& v, Index n, Index t) {
  if (v.size() != n * t) throw DataError("vector length does not match N x T");
  Matrix x(n, t);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < t; ++j) x(i, j) = v(i * t + j);
  return x;
}

std::string_view to_string(ProductKind k) {
  switch (k) {
    case ProductKind::kronecker:
      return "kronecker";
    case ProductKind::cartesian:
      return "cartesian";
    case ProductKind::strong:
      return "strong";
  }
  return "cartesian";
}

ProductKind parse_product_kind(std::string_view name) {
  if (name == "kronecker") return ProductKind::kronecker;
  if (name == "cartesian") return ProductKind::cartesian;
  if (name == "strong") return ProductKind::strong;
  throw DataError("unknown product kind '" + std::string(name) + "'");
}

Matrix kronecker(const Matrix& a, const Matrix& b) { return kron_impl(a, b); }
CMatrix kronecker(const CMatrix& a, const CMatrix& b) { return kron_impl(a, b); }

ProductGso product_gso(const Gso& graph, const Gso& time, ProductKind kind) {
  const Matrix& sg = graph.matrix();
  const Matrix& st = time.matrix();
  ProductGso p;
  p.kind = kind;
  p.graph_factor = sg;
  p.time_factor = st;
  const Matrix kron = kronecker(sg, st);
  const Matrix cart = kronecker(sg, Matrix::Identity(st.rows(), st.rows())) +
                      kronecker(Matrix::Identity(sg.rows(), sg.rows()), st);
  switch (kind) {
    case ProductKind::kronecker:
      p.matrix = kron;
      break;
    case ProductKind::cartesian:
      p.matrix = cart;
      break;
    case ProductKind::strong:
      p.matrix = kron + cart;
      break;
  }
  return p;
}

CMatrix joint_gft(const SpectralDecomposition& graph, const SpectralDecomposition& time,
                  const Matrix& x) {
  if (x.rows() != graph.size() || x.cols() != time.size())
    throw DataError("time-vertex signal must be N x T matching both decompositions");
  return graph.cinverse * x.cast<Complex>() * time.cinverse.transpose();
}

CMatrix joint_igft(const SpectralDecomposition& graph, const SpectralDecomposition& time,
                   const CMatrix& xhat) {
  if (xhat.rows() != graph.size() || xhat.cols() != time.size())
    throw DataError("joint spectrum must be N x T matching both decompositions");
  return graph.cvectors * xhat * time.cvectors.transpose();
}

std::string_view to_string(VarMode m) {
  return m == VarMode::graph_var ? "graph-var" : "structural-var";
}

VarMode parse_var_mode(std::string_view name) {
  if (name == "graph" || name == "graph-var") return VarMode::graph_var;
  if (name == "structural" || name == "structural-var") return VarMode::structural_var;
  throw DataError("unknown VAR mode '" + std::string(name) + "'");
}

VarModel fit_graph_var(const Matrix& xs, const Gso& s, Index p_order, Index l_order, bool causal) {
  check_history(xs, p_order);
  if (l_order < 0) throw DataError("filter order must be nonnegative");
  const Index n = xs.rows();
  if (s.size() != n) throw DataError("series rows do not match the operator size");
  const Index steps = xs.cols() - p_order;

  // powers[l] = S^l X, built by repeated sparse products.
  const auto csr = kernels::CsrMatrix::from_dense(s.matrix());
  std::vector<Matrix> powers(static_cast<std::size_t>(l_order + 1));
  powers[0] = xs;
  const double shift_taps[] = {0.0, 1.0};
  for (Index l = 1; l <= l_order; ++l) powers[l] = kernels::poly_apply_batch(csr, shift_taps, powers[l - 1]);

  std::vector<std::pair<Index, Index>> params;
  for (Index p = 1; p <= p_order; ++p)
    for (Index l = 0; l <= l_order; ++l)
      if (!causal || l <= p) params.emplace_back(p, l);
  const Index k = static_cast<Index>(params.size());

  Matrix design(n * steps, k);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < k; ++c) {
    const auto [p, l] = params[c];
    for (Index t = 0; t < steps; ++t) design.col(c).segment(t * n, n) = powers[l].col(t + p_order - p);
  }
  Vector target(n * steps);
  for (Index t = 0; t < steps; ++t) target.segment(t * n, n) = xs.col(t + p_order);

  Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * smax) ++rank;
  if (rank < k)
    throw NumericalError("graph-VAR design is rank deficient: nullspace dimension " +
                         std::to_string(k - rank) + ", coefficients not identifiable");
  const Vector h = svd.solve(target);

  VarModel m;
  m.mode = VarMode::graph_var;
  m.order = p_order;
  m.taps = Matrix::Zero(p_order, l_order + 1);
  for (Index c = 0; c < k; ++c) m.taps(params[c].first - 1, params[c].second) = h(c);
  m.residual = (target - design * h).norm();
  m.condition = smax / sv.minCoeff();
  return m;
}

VarModel fit_structural_var(const Matrix& xs, Index p_order, const StructuralVarOptions& opt) {
  check_history(xs, p_order);
  if (!(opt.lambda >= 0.0)) throw DataError("lambda must be nonnegative");
  const Index n = xs.rows();
  const Index steps = xs.cols() - p_order;
  const Index width = n * (p_order + 1);

  // Y = B Z with B = [A_0 A_1 ... A_P] and Z stacking x_t, x_{t-1}, ..., x_{t-P}.
  Matrix y(n, steps), z(width, steps);
  for (Index t = 0; t < steps; ++t) {
    y.col(t) = xs.col(t + p_order);
    for (Index p = 0; p <= p_order; ++p) z.col(t).segment(p * n, n) = xs.col(t + p_order - p);
  }
  const Matrix zzt = z * z.transpose();
  const Matrix yzt = y * z.transpose();
  const double smax2 = Eigen::SelfAdjointEigenSolver<Matrix>(zzt, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff();
  // Gradient of ||Y - B Z||_F^2 is Lipschitz with constant 2 sigma_max(Z)^2.
  const double step = smax2 > 0.0 ? 1.0 / (2.0 * smax2) : 0.0;

  auto objective = [&](const Matrix& b) {
    return (y - b * z).squaredNorm() + opt.lambda * b.cwiseAbs().sum();
  };

  const double grad_scale = std::max(2.0 * yzt.norm(), 1e-300);
  Matrix b = Matrix::Zero(n, width);
  VarModel m;
  m.mode = VarMode::structural_var;
  m.order = p_order;
  double f = objective(b);
  m.objective_trace.push_back(f);
  int iter = 0;
  for (; iter < opt.max_iters && step > 0.0; ++iter) {
    const Matrix grad = 2.0 * (b * zzt - yzt);
    Matrix next = (b - step * grad).unaryExpr([&](double v) { return soft(v, opt.lambda * step); });
    for (Index i = 0; i < n; ++i) next(i, i) = 0.0;  // A_0 diagonal
    const double f_next = objective(next);
    // Proximal-gradient mapping relative to the gradient at B = 0; unlike the
    // relative step it does not vanish when the step is tiny.
    const double gmap = (b - next).norm() / step / grad_scale;
    b = std::move(next);
    m.objective_trace.push_back(f_next);
    f = f_next;
    if (gmap < opt.tol) {
      ++iter;
      break;
    }
  }
  m.iterations = iter;
  m.residual = (y - b * z).norm();
  for (Index p = 0; p <= p_order; ++p) m.lags.push_back(b.middleCols(p * n, n));

  // Companion matrix of x_t = (I - A_0)^-1 sum_p A_p x_{t-p}.
  Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - m.lags[0]);
  if (detail::reciprocal_condition(lu) > 1e-14) {
    Matrix companion = Matrix::Zero(n * p_order, n * p_order);
    for (Index p = 1; p <= p_order; ++p) companion.block(0, (p - 1) * n, n, n) = lu.solve(m.lags[p]);
    if (p_order > 1) companion.bottomLeftCorner(n * (p_order - 1), n * (p_order - 1)).setIdentity();
    m.spectral_radius = Eigen::EigenSolver<Matrix>(companion, false).eigenvalues().cwiseAbs().maxCoeff();
  } else {
    m.spectral_radius = INFINITY;
  }
  return m;
}

VarModel to_structural(const VarModel& g, const Gso& s) {
  if (g.mode != VarMode::graph_var) throw DataError("model is not a graph-VAR");
  const Index n = s.size();
  VarModel out;
  out.mode = VarMode::structural_var;
  out.order = g.order;
  out.lags.push_back(Matrix::Zero(n, n));
  for (Index p = 0; p < g.order; ++p) {
    Matrix acc = Matrix::Zero(n, n);
    for (Index l = g.taps.cols(); l-- > 0;) {
      acc = s.matrix() * acc;
      acc.diagonal().array() += g.taps(p, l);
    }
    out.lags.push_back(std::move(acc));
  }
  return out;
}

Vector predict_var(const VarModel& model, const Gso* s, const Matrix& history) {
  if (history.cols() < model.order) throw DataError("history needs at least P columns");
  const Index last = history.cols() - 1;
  if (model.mode == VarMode::graph_var) {
    if (s == nullptr) throw DataError("graph-VAR prediction needs the shift operator");
    if (history.rows() != s->size()) throw DataError("history rows do not match the operator");
    const auto csr = kernels::CsrMatrix::from_dense(s->matrix());
    Vector out = Vector::Zero(history.rows()), tmp(history.rows());
    for (Index p = 1; p <= model.order; ++p) {
      const Vector x = history.col(last - p + 1);
      std::vector<double> taps(static_cast<std::size_t>(model.taps.cols()));
      for (Index l = 0; l < model.taps.cols(); ++l) taps[l] = model.taps(p - 1, l);
      kernels::poly_apply(csr, taps, {x.data(), static_cast<std::size_t>(x.size())},
                          {tmp.data(), static_cast<std::size_t>(tmp.size())});
      out += tmp;
    }
    return out;
  }
  const Index n = history.rows();
  if (static_cast<Index>(model.lags.size()) != model.order + 1 || model.lags[0].rows() != n)
    throw DataError("structural-VAR model does not match the history");
  Vector rhs = Vector::Zero(n);
  for (Index p = 1; p <= model.order; ++p) rhs += model.lags[p] * history.col(last - p + 1);
  if (model.lags[0].isZero(0.0)) return rhs;
  Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - model.lags[0]);
  if (!(detail::reciprocal_condition(lu) * 1e12 >= 1.0)) throw NumericalError("I - A_0 is singular");
  return lu.solve(rhs);
}

}  // namespace gspkit
