#include "gspkit/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "gspkit/error.hpp"

#include "lu.hpp"

namespace gspkit {

namespace {

// Euclidean projection onto {w >= 0, sum w = total}.
Vector project_simplex(const Vector& v, double total) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumsum += u[i];
    const double t = (cumsum - total) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0);
}

struct EdgeIndex {
  std::vector<std::pair<Index, Index>> pairs;
  explicit EdgeIndex(Index n) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
};

Vector degrees(const EdgeIndex& e, const Vector& w, Index n) {
  Vector d = Vector::Zero(n);
  for (std::size_t k = 0; k < e.pairs.size(); ++k) {
    d(e.pairs[k].first) += w(static_cast<Index>(k));
    d(e.pairs[k].second) += w(static_cast<Index>(k));
  }
  return d;
}

double smooth_objective(const EdgeIndex& e, const Vector& w, const Vector& z, double beta, Index n) {
  const Vector d = degrees(e, w, n);
  return w.dot(z) + beta * (d.squaredNorm() + 2.0 * w.squaredNorm());
}

Graph graph_from_symmetric(const Matrix& s, double threshold) {
  std::vector<Edge> edges;
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = i + 1; j < s.cols(); ++j)
      if (std::abs(s(i, j)) > threshold) edges.push_back({i, j, s(i, j)});
  return build_graph(s.rows(), std::move(edges), false);
}

std::set<std::pair<Index, Index>> support_of(const Graph& g) {
  std::set<std::pair<Index, Index>> out;
  for (const auto& e : g.edges()) out.emplace(std::min(e.src, e.dst), std::max(e.src, e.dst));
  return out;
}

SupportScore score(const std::set<std::pair<Index, Index>>& truth,
                   const std::set<std::pair<Index, Index>>& est) {
  SupportScore s;
  std::size_t hits = 0;
  for (const auto& p : est) hits += truth.count(p);
  s.precision = est.empty() ? (truth.empty() ? 1.0 : 0.0) : static_cast<double>(hits) / est.size();
  s.recall = truth.empty() ? 1.0 : static_cast<double>(hits) / truth.size();
  s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

}  // namespace

LearnedGraph learn_smooth_laplacian(const SignalMatrix& xs, const SmoothLaplacianOptions& opt) {
  const Index n = xs.rows();
  if (n < 2) throw DataError("graph learning needs at least two vertices");
  if (xs.cols() < 2) throw DataError("graph learning needs at least two signals");
  if (!(opt.beta > 0.0)) throw DataError("beta must be positive");
  const double trace = opt.trace > 0.0 ? opt.trace : static_cast<double>(n);

  const EdgeIndex e(n);
  const Index edges = static_cast<Index>(e.pairs.size());
  // trace(X^T L X) = sum_{i<j} w_ij ||row_i - row_j||^2
  Vector z(edges);
  for (Index k = 0; k < edges; ++k)
    z(k) = (xs.row(e.pairs[k].first) - xs.row(e.pairs[k].second)).squaredNorm();
  if (z.maxCoeff() == 0.0)
    throw NumericalError("all signals are constant across vertices: smoothness gradient is degenerate");

  const double total = 0.5 * trace;  // trace(L) = 2 sum w
  Vector w = Vector::Constant(edges, total / static_cast<double>(edges));
  double f = smooth_objective(e, w, z, opt.beta, n);

  LearnedGraph out;
  out.objective_trace.push_back(f);
  int iter = 0;
  for (; iter < opt.max_iters; ++iter) {
    const Vector d = degrees(e, w, n);
    Vector g = z + 4.0 * opt.beta * w;
    for (Index k = 0; k < edges; ++k)
      g(k) += 2.0 * opt.beta * (d(e.pairs[k].first) + d(e.pairs[k].second));

    double step = 1.0;
    bool accepted = false;
    Vector w_next;
    double f_next = f;
    for (int halving = 0; halving < 80; ++halving, step *= 0.5) {
      w_next = project_simplex(w - step * g, total);
      const Vector delta = w_next - w;
      f_next = smooth_objective(e, w_next, z, opt.beta, n);
      if (f_next <= f + g.dot(delta) + delta.squaredNorm() / (2.0 * step) && f_next <= f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.diagnostics.converged = true;
      break;
    }
    const double change = std::abs(f - f_next) / std::max(std::abs(f), 1e-300);
    w = std::move(w_next);
    f = f_next;
    out.objective_trace.push_back(f);
    if (change < opt.tol) {
      out.diagnostics.converged = true;
      ++iter;
      break;
    }
  }
  out.diagnostics.iterations = iter;

  std::vector<Edge> kept;
  for (Index k = 0; k < edges; ++k)
    if (w(k) > 0.0) kept.push_back({e.pairs[k].first, e.pairs[k].second, w(k)});
  out.graph = build_graph(n, std::move(kept), false);
  out.gso = make_gso(out.graph, GsoVariant::combinatorial_laplacian);

  const Matrix& l = out.gso.matrix();
  out.diagnostics.row_sum_residual = l.rowwise().sum().cwiseAbs().maxCoeff();
  Matrix off = l;
  off.diagonal().setConstant(-INFINITY);
  out.diagnostics.max_off_diagonal = n > 1 ? off.maxCoeff() : 0.0;
  out.diagnostics.trace_residual = std::abs(l.trace() - trace);
  return out;
}

Graph correlation_graph(const SignalMatrix& xs, double tau) {
  const Index n = xs.rows();
  if (xs.cols() < 2) throw DataError("correlation needs at least two signals");
  Matrix centered = xs.colwise() - xs.rowwise().mean();
  Vector norms = centered.rowwise().norm();
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    if (norms(i) == 0.0) continue;
    for (Index j = i + 1; j < n; ++j) {
      if (norms(j) == 0.0) continue;
      const double corr = std::abs(centered.row(i).dot(centered.row(j)) / (norms(i) * norms(j)));
      if (corr > tau) edges.push_back({i, j, std::min(corr, 1.0)});
    }
  }
  return build_graph(n, std::move(edges), false);
}

Graph precision_graph(const SignalMatrix& xs, double ridge, double tau) {
  const Index n = xs.rows();
  if (xs.cols() < 1) throw DataError("precision estimate needs signals");
  if (!(ridge >= 0.0)) throw DataError("ridge must be nonnegative");
  Matrix c = xs * xs.transpose() / static_cast<double>(xs.cols());
  c.diagonal().array() += ridge;
  Eigen::PartialPivLU<Matrix> lu(c);
  if (!(detail::reciprocal_condition(lu) * 1e12 >= 1.0))
    throw NumericalError("regularized covariance is singular; increase the ridge");
  Matrix p = lu.inverse();
  p = 0.5 * (p + p.transpose());
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(p(i, j)) > tau) edges.push_back({i, j, std::abs(p(i, j))});
  return build_graph(n, std::move(edges), false);
}

LearnedGraph spectral_template_adjacency(const Matrix& v, const SpectralTemplateOptions& opt) {
  const Index n = v.rows();
  if (n < 2 || v.cols() != n) throw DataError("template needs a square N x N eigenvector matrix");
  if ((v.transpose() * v - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8)
    throw DataError("template eigenvectors are not orthonormal");

  // Linear constraints on mu: S_ii = sum_k V_ik^2 mu_k = 0, and
  // sum_j S_0j = sum_k V_0k (sum_j V_jk) mu_k = 1.
  Matrix a(n + 1, n);
  a.topRows(n) = v.cwiseAbs2();
  const Vector colsum = v.colwise().sum();
  for (Index k = 0; k < n; ++k) a(n, k) = v(0, k) * colsum(k);
  Vector b = Vector::Zero(n + 1);
  b(n) = 1.0;

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = opt.rank_tol * sv.maxCoeff();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  const Matrix& uu = svd.matrixU();
  const Matrix& vv = svd.matrixV();
  Vector mu0 = Vector::Zero(n);
  for (Index i = 0; i < rank; ++i) mu0 += vv.col(i) * (uu.col(i).dot(b) / sv(i));
  const double residual = (a * mu0 - b).norm();
  if (!(residual <= opt.feasibility_tol))
    throw NumericalError("spectral template constraints are infeasible (residual " +
                         std::to_string(residual) + ")");
  const Matrix null = vv.rightCols(n - rank);

  auto build = [&](const Vector& mu) -> Matrix { return v * mu.asDiagonal() * v.transpose(); };
  auto l1 = [](const Matrix& s) { return s.cwiseAbs().sum(); };

  Vector mu = mu0;
  Vector best = mu;
  double best_obj = l1(build(mu));
  LearnedGraph out;
  out.objective_trace.push_back(best_obj);
  const double radius = std::max(mu0.norm(), 1e-12);
  int iter = 0;
  if (null.cols() > 0) {
    double checkpoint = best_obj;
    for (; iter < opt.max_iters; ++iter) {
      const Matrix s = build(mu);
      const Matrix sign = s.unaryExpr([](double x) { return double((x > 0.0) - (x < 0.0)); });
      Vector g(n);
      for (Index k = 0; k < n; ++k) g(k) = v.col(k).dot(sign * v.col(k));
      const Vector gp = null * (null.transpose() * g);
      const double gnorm = gp.norm();
      if (gnorm == 0.0) {
        out.diagnostics.converged = true;
        break;
      }
      mu -= (radius / std::sqrt(static_cast<double>(iter + 1))) * gp / gnorm;
      // Re-project to cancel drift out of the affine set.
      mu = mu0 + null * (null.transpose() * (mu - mu0));
      const double obj = l1(build(mu));
      if (obj < best_obj) {
        best_obj = obj;
        best = mu;
      }
      out.objective_trace.push_back(best_obj);
      if ((iter + 1) % 50 == 0) {
        if (std::abs(checkpoint - best_obj) < 1e-8 * std::max(best_obj, 1e-300)) {
          out.diagnostics.converged = true;
          ++iter;
          break;
        }
        checkpoint = best_obj;
      }
    }
  } else {
    out.diagnostics.converged = true;
  }
  out.diagnostics.iterations = iter;
  out.diagnostics.constraint_residual = (a * best - b).norm();

  Matrix s = build(best);
  s = 0.5 * (s + s.transpose());
  const double peak = s.cwiseAbs().maxCoeff();
  s = s.unaryExpr([peak](double x) { return std::abs(x) < 1e-6 * peak ? 0.0 : x; });
  s.diagonal().setZero();
  out.gso = Gso::custom(s);
  out.graph = graph_from_symmetric(s, 0.0);
  return out;
}

SupportScore support_f1(const Graph& truth, const Graph& estimate) {
  return score(support_of(truth), support_of(estimate));
}

SupportScore support_f1(const Graph& truth, const Matrix& s, double threshold) {
  std::set<std::pair<Index, Index>> est;
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = i + 1; j < s.cols(); ++j)
      if (std::abs(s(i, j)) > threshold) est.emplace(i, j);
  return score(support_of(truth), est);
}

}  // namespace gspkit
