#include <doctest.h>

#include <random>

#include "gspkit/error.hpp"
#include "gspkit/graph.hpp"
#include "gspkit/jacobi.hpp"
#include "gspkit/random.hpp"
#include "gspkit/spectral.hpp"
#include "gspkit/stochastic.hpp"
#include "gspkit/topology.hpp"
#include "oracles.hpp"

using namespace gspkit;

namespace {

// Smooth signals: white noise shaped by 1/sqrt(lambda) on the nonzero
// Laplacian frequencies, i.e. covariance close to the pseudoinverse of L.
SignalMatrix smooth_signals(const Graph& g, Index m, std::uint64_t seed) {
  const SpectralDecomposition d = decompose(make_gso(g, GsoVariant::combinatorial_laplacian));
  Vector psd(d.size());
  for (Index i = 0; i < d.size(); ++i) psd(i) = d.values(i) < 1e-9 ? 1.0 : 1.0 / d.values(i);
  return synthesize_stationary(d, psd, m, seed);
}

double best_threshold_f1(const Graph& truth, const Matrix& s) {
  double best = 0.0;
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = i + 1; j < s.cols(); ++j)
      if (s(i, j) != 0.0) best = std::max(best, support_f1(truth, s, std::abs(s(i, j)) * (1 - 1e-12)).f1);
  return best;
}

void check_laplacian(const LearnedGraph& lg, double trace) {
  const Matrix& l = lg.gso.matrix();
  CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-8);
  Matrix off = l;
  off.diagonal().setZero();
  CHECK(off.maxCoeff() <= 1e-10);
  CHECK(std::abs(l.trace() - trace) <= 1e-6);
  CHECK(lg.diagnostics.row_sum_residual <= 1e-8);
  CHECK(lg.diagnostics.trace_residual <= 1e-6);
  for (std::size_t i = 1; i < lg.objective_trace.size(); ++i)
    CHECK(lg.objective_trace[i] <= lg.objective_trace[i - 1]);
}

// Random weighted adjacency on n vertices with about 2n edges.
Graph sparse_adjacency(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> edges;
  const double p = 4.0 / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (u(rng) < p) edges.push_back({i, j, 0.5 + u(rng)});
  return build_graph(n, std::move(edges), false);
}

}  // namespace

TEST_CASE("smoothness learning recovers a planted two-cluster graph") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    const Graph g = oracle::two_cluster_graph(20, 0.3, 2, rng);
    const SignalMatrix xs = smooth_signals(g, 500, seed);
    SmoothLaplacianOptions opt;
    opt.beta = 100.0;
    const LearnedGraph lg = learn_smooth_laplacian(xs, opt);
    check_laplacian(lg, 20.0);
    Matrix w = -lg.gso.matrix();
    w.diagonal().setZero();
    CHECK(best_threshold_f1(g, w) >= 0.8);
  }
}

TEST_CASE("large beta spreads the weight uniformly") {
  std::mt19937_64 rng(3);
  const Graph g = oracle::random_graph(8, 0.4, rng, true, true);
  SmoothLaplacianOptions opt;
  opt.beta = 1e6;
  opt.trace = 8.0;
  const LearnedGraph lg = learn_smooth_laplacian(smooth_signals(g, 50, 4), opt);
  check_laplacian(lg, 8.0);
  // Equal weights on all 28 pairs minimise the Frobenius term at fixed trace.
  const double mean = 4.0 / 28.0;
  Matrix w = -lg.gso.matrix();
  for (Index i = 0; i < 8; ++i)
    for (Index j = i + 1; j < 8; ++j) CHECK(std::abs(w(i, j) - mean) <= 0.01 * mean);
}

TEST_CASE("smoothness learning input checks") {
  CHECK_THROWS_AS(learn_smooth_laplacian(Matrix::Ones(5, 10), {}), NumericalError);
  CHECK_THROWS_AS(learn_smooth_laplacian(Matrix::Random(5, 1), {}), DataError);
  SmoothLaplacianOptions bad;
  bad.beta = 0.0;
  CHECK_THROWS_AS(learn_smooth_laplacian(Matrix::Random(5, 10), bad), DataError);
}

TEST_CASE("correlation graphs") {
  std::mt19937_64 rng(5);
  Matrix xs(3, 50);
  for (Index t = 0; t < 50; ++t) xs.col(t) = oracle::random_vector(3, rng);
  xs.row(1) = 2.0 * xs.row(0);
  const Graph g = correlation_graph(xs, 0.99);
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0].weight == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(correlation_graph(xs, 1.0 + 1e-9).edges().empty());

  Matrix constant_row = xs;
  constant_row.row(2).setConstant(3.0);
  const Graph c = correlation_graph(constant_row, 0.0);
  for (const auto& e : c.edges()) CHECK((e.src != 2 && e.dst != 2));

  int empty = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Matrix white(6, 10000);
    for (Index t = 0; t < white.cols(); ++t) {
      CounterRng r(seed, static_cast<std::uint64_t>(t));
      for (Index i = 0; i < 6; ++i) white(i, t) = r.normal();
    }
    empty += correlation_graph(white, 0.3).edges().empty();
  }
  CHECK(empty >= 99);
}

TEST_CASE("precision graphs") {
  CHECK(precision_graph(Matrix::Identity(4, 4) * 2.0, 0.1, 0.01).edges().empty());
  Matrix singular(3, 2);
  singular << 1, 0, 0, 1, 1, 1;
  CHECK_THROWS_AS(precision_graph(singular, 0.0, 0.1), NumericalError);
  CHECK_THROWS_AS(precision_graph(singular, -1.0, 0.1), DataError);

  // Chain GMRF: tridiagonal precision Q, samples x = Q^{-1/2} z.
  const Index n = 8;
  Matrix q = 2.0 * Matrix::Identity(n, n);
  for (Index i = 0; i + 1 < n; ++i) q(i, i + 1) = q(i + 1, i) = -0.8;
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  const Matrix root = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                      es.eigenvectors().transpose();
  Matrix xs(n, 10000);
  for (Index t = 0; t < xs.cols(); ++t) {
    CounterRng r(77, static_cast<std::uint64_t>(t));
    Vector z(n);
    for (Index i = 0; i < n; ++i) z(i) = r.normal();
    xs.col(t) = root * z;
  }
  std::vector<Edge> chain;
  for (Index i = 0; i + 1 < n; ++i) chain.push_back({i, i + 1, 1.0});
  const Graph truth = build_graph(n, chain, false);
  const Graph est = precision_graph(xs, 1e-6, 0.4);
  CHECK(support_f1(truth, est).f1 == 1.0);
}

TEST_CASE("spectral templates with exact eigenvectors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = sparse_adjacency(8, rng);
    if (connected_components(g) != 1) continue;
    const Matrix a = make_gso(g, GsoVariant::adjacency).matrix();
    const SymmetricEigen e = jacobi_eigen(a);
    const LearnedGraph lg = spectral_template_adjacency(e.vectors);
    CHECK(lg.diagnostics.constraint_residual <= 1e-8);
    CHECK(support_f1(g, lg.graph).f1 >= 0.9);
    // Same operator up to the first-row-sum normalization.
    const Matrix expected = a / a.row(0).sum();
    CHECK((lg.gso.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-6);
    // Scale consistency.
    const LearnedGraph scaled = spectral_template_adjacency(jacobi_eigen(3.5 * a).vectors);
    CHECK((scaled.gso.matrix() - lg.gso.matrix()).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("spectral templates reject infeasible input") {
  CHECK_THROWS_AS(spectral_template_adjacency(Matrix::Identity(5, 5)), NumericalError);
  CHECK_THROWS_AS(spectral_template_adjacency(Matrix::Ones(3, 3)), DataError);
}

TEST_CASE("spectral templates from sample covariance eigenvectors") {
  std::mt19937_64 rng(13);
  int done = 0;
  for (int trial = 0; trial < 20 && done < 3; ++trial) {
    const Graph g = sparse_adjacency(8, rng);
    if (connected_components(g) != 1) continue;
    const Gso s = make_gso(g, GsoVariant::adjacency);
    const SpectralDecomposition d = decompose(s);
    Vector psd(8);
    for (Index i = 0; i < 8; ++i) psd(i) = std::exp(0.7 * d.values(i));
    const Matrix c = sample_covariance(synthesize_stationary(d, psd, 100000, 17 + trial)).matrix;
    SpectralTemplateOptions opt;
    opt.rank_tol = 1e-2;
    opt.feasibility_tol = 1e-1;
    const LearnedGraph lg = spectral_template_adjacency(jacobi_eigen(c).vectors, opt);
    CHECK(best_threshold_f1(g, lg.gso.matrix()) >= 0.8);
    ++done;
  }
  CHECK(done == 3);
}

TEST_CASE("support scores") {
  const Graph truth = build_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}}, false);
  const Graph est = build_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}, false);
  const SupportScore s = support_f1(truth, est);
  CHECK(s.precision == 0.5);
  CHECK(s.recall == 0.5);
  CHECK(s.f1 == 0.5);
  CHECK(support_f1(truth, truth).f1 == 1.0);
}
