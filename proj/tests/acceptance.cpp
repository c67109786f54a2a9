// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "gspkit/gspkit.hpp"
#include "gspkit/io.hpp"
#include "oracles.hpp"

using namespace gspkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the worst value seen for a named quantity and whether it met its bound.
class Tally {
 public:
  void upper(const std::string& name, double value, double bound) {
    add(name, value, value <= bound, "<=", bound, true);
  }
  void lower(const std::string& name, double value, double bound) {
    add(name, value, value >= bound, ">=", bound, false);
  }
  void require(const std::string& name, bool ok) {
    if (!ok) {
      pass_ = false;
      failures_.push_back(name);
    }
  }
  Outcome outcome() const {
    Outcome o{pass_, ""};
    for (const auto& e : entries_) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s%s=%.3g%s%.0e", o.detail.empty() ? "" : ", ",
                    e.name.c_str(), e.worst, e.op.c_str(), e.bound);
      o.detail += buf;
    }
    for (const auto& f : failures_) o.detail += (o.detail.empty() ? "" : ", ") + f + " failed";
    return o;
  }

 private:
  struct Entry {
    std::string name;
    double worst;
    std::string op;
    double bound;
    bool upper;
  };
  void add(const std::string& name, double value, bool ok, const char* op, double bound, bool upper) {
    if (!ok) pass_ = false;
    for (auto& e : entries_)
      if (e.name == name) {
        e.worst = upper ? std::max(e.worst, value) : std::min(e.worst, value);
        return;
      }
    entries_.push_back({name, value, op, bound, upper});
  }
  bool pass_ = true;
  std::vector<Entry> entries_;
  std::vector<std::string> failures_;
};

double rel(double err, double scale) { return err / std::max(1.0, scale); }

std::vector<double> random_taps(std::size_t len, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  std::vector<double> h(len);
  for (auto& c : h) c = z(rng);
  return h;
}

Outcome dft_equivalence() {
  Tally t;
  const Index n = 8;
  const SpectralDecomposition d = decompose(make_gso(directed_cycle(n), GsoVariant::adjacency));
  t.upper("|V^-1 - F|max", (d.cinverse - oracle::dft_matrix(n)).cwiseAbs().maxCoeff(), 1e-10);
  std::mt19937_64 rng(1);
  const Gso a = make_gso(directed_cycle(n), GsoVariant::adjacency);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = random_taps(1 + trial % 8, rng);
    const Vector x = oracle::random_vector(n, rng);
    const Vector ref = oracle::circular_convolution(h, x);
    t.upper("conv err", (apply_polynomial(a, h, x) - ref).cwiseAbs().maxCoeff(), 1e-10);
  }
  return t.outcome();
}

Outcome shift_semantics() {
  Tally t;
  std::mt19937_64 rng(2);
  bool exact = true;
  int count = 0;
  for (Index n = 3; n <= 16; ++n) {
    const Gso a = make_gso(directed_cycle(n), GsoVariant::adjacency);
    for (int k = 0; k < 100; ++k) {
      const Vector x = oracle::random_vector(n, rng);
      const Vector y = apply_polynomial(a, std::vector<double>{0.0, 1.0}, x);
      const Vector z = a.matrix() * x;
      for (Index i = 0; i < n; ++i) exact = exact && y((i + 1) % n) == x(i) && z((i + 1) % n) == x(i);
      ++count;
    }
  }
  t.require("exact shift on " + std::to_string(count) + " signals", exact);
  return t.outcome().pass ? Outcome{true, std::to_string(count) + " signals shifted exactly"}
                          : t.outcome();
}

Outcome spectral_contracts() {
  Tally t;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 3 + trial % 20;
    const Graph g = oracle::random_graph(n, 0.3, rng, true, true);
    const SpectralDecomposition d = decompose(make_gso(g, GsoVariant::combinatorial_laplacian));
    Index zeros = 0;
    for (Index i = 0; i < n; ++i) zeros += std::abs(d.values(i)) <= 1e-10;
    t.require("unique zero eigenvalue", zeros == 1);
    const Vector v0 = d.vectors.col(0);
    const double err = std::min((v0 - Vector::Constant(n, 1.0 / std::sqrt(double(n)))).cwiseAbs().maxCoeff(),
                                (v0 + Vector::Constant(n, 1.0 / std::sqrt(double(n)))).cwiseAbs().maxCoeff());
    t.upper("null vector err", err, 1e-10);
  }
  for (Index parts = 1; parts <= 4; ++parts) {
    std::vector<Edge> edges;
    Index offset = 0;
    for (Index p = 0; p < parts; ++p) {
      const Graph g = oracle::random_graph(3 + p, 0.5, rng, true, true);
      for (const auto& e : g.edges()) edges.push_back({e.src + offset, e.dst + offset, e.weight});
      offset += g.n_vertices();
    }
    const Graph u = build_graph(offset, edges, false);
    const SpectralDecomposition d = decompose(make_gso(u, GsoVariant::combinatorial_laplacian));
    Index zeros = 0;
    for (Index i = 0; i < d.size(); ++i) zeros += std::abs(d.values(i)) <= 1e-10;
    t.require("multiplicity = components", zeros == parts && connected_components(u) == parts);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 30;
    const Graph g = oracle::random_graph(n, 0.4, rng, true, false);
    const Gso l = make_gso(g, GsoVariant::combinatorial_laplacian);
    const Vector x = oracle::random_vector(n, rng);
    const double edge = oracle::edge_sum(make_gso(g, GsoVariant::adjacency).matrix(), x);
    const double quad = x.dot(l.matrix() * x);
    t.upper("x'Lx vs edge sum", rel(std::abs(quad - edge), edge), 1e-10);
    t.upper("total_variation vs edge sum", rel(std::abs(total_variation(l, x) - edge), edge), 1e-10);
  }
  return t.outcome();
}

Outcome filter_equivalence() {
  Tally t;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + static_cast<Index>(rng() % 48);
    const Gso s = make_gso(oracle::random_graph(n, 0.2, rng), GsoVariant::normalized_laplacian);
    const SpectralDecomposition d = decompose(s);
    const auto h = random_taps(1 + rng() % 7, rng);
    const Vector x = oracle::random_vector(n, rng);
    const Vector poly = apply_polynomial(s, h, x);
    const Vector spec = apply_response(d, taps_to_response(d, h), x);
    t.upper("poly vs spectral", rel((poly - spec).norm(), poly.norm()), 1e-8);
    const Vector sh = s.matrix() * poly;
    const Vector hs = apply_polynomial(s, h, Vector(s.matrix() * x));
    t.upper("S H x vs H S x", rel((sh - hs).norm(), sh.norm()), 1e-9);
    const auto h2 = random_taps(1 + rng() % 7, rng);
    const GraphFilter f1 = GraphFilter::from_taps(h), f2 = GraphFilter::from_taps(h2);
    const Vector a = apply_filter(s, cascade(f1, f2), x);
    const Vector b = apply_filter(s, cascade(f2, f1), x);
    const Vector c = apply_filter(s, f1, apply_filter(s, f2, x));
    t.upper("cascade commutativity", rel((a - b).norm(), a.norm()), 1e-9);
    t.upper("cascade vs series", rel((a - c).norm(), a.norm()), 1e-9);
  }
  return t.outcome();
}

Outcome sampling_theorem() {
  Tally t;
  std::mt19937_64 rng(5);
  std::vector<double> below;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 6 + trial % 11;
    const Gso l = make_gso(oracle::random_graph(n, 0.35, rng, true, true), GsoVariant::combinatorial_laplacian);
    const SpectralDecomposition d = decompose(l);
    for (Index k = 1; k <= 4; ++k) {
      const BandlimitedModel b(d, k);
      const Vector x = b.basis() * oracle::random_vector(k, rng);
      for (Index m_size = k; m_size <= std::min<Index>(n, k + 3); ++m_size) {
        const SamplingSet m = select_sampling_set(b, m_size).set;
        t.upper("recovery err |M|>=K",
                rel((interpolate_bandlimited(b, m, sample(x, m)) - x).norm(), x.norm()), 1e-8);
      }
      if (k >= 2) {
        // |M| = K - 1: the best the data supports is a (K-1)-bandlimited fit.
        const BandlimitedModel bk(d, k - 1);
        const SamplingSet m = select_sampling_set(bk, k - 1).set;
        below.push_back((interpolate_bandlimited(bk, m, sample(x, m)) - x).norm() / x.norm());
      }
    }
  }
  std::nth_element(below.begin(), below.begin() + below.size() / 2, below.end());
  t.lower("median rel err |M|=K-1", below[below.size() / 2], 1e-2);
  return t.outcome();
}

Outcome regularized_closed_form() {
  Tally t;
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 6 + trial % 10;
    const Gso l = make_gso(oracle::random_graph(n, 0.4, rng, true, true), GsoVariant::combinatorial_laplacian);
    const Matrix h = oracle::spectral_function(l.matrix(), oracle::heat, 0.5);
    std::vector<Index> all(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(n / 2 + 1));
    std::sort(all.begin(), all.end());
    const SamplingSet m(n, all);
    const Vector xm = oracle::random_vector(m.size(), rng);
    const double alpha = std::pow(10.0, -2.0 + 4.0 * (trial % 7) / 6.0);
    const Vector x = interpolate_regularized(h, alpha, m, xm);
    const Matrix phi = m.selection();
    const Matrix r = Matrix::Identity(n, n) - h;
    const Vector ref =
        (phi.transpose() * phi + alpha * r.transpose() * r).colPivHouseholderQr().solve(phi.transpose() * xm);
    t.upper("closed form vs normal eqs", rel((x - ref).norm(), ref.norm()), 1e-9);

    if (trial < 10) {
      double prev = INFINITY;
      bool monotone = true;
      for (int i = 0; i < 10; ++i) {
        const double a = std::pow(10.0, -3.0 + 0.6 * i);
        const double pen = (r * interpolate_regularized(h, a, m, xm)).squaredNorm();
        monotone = monotone && pen <= prev * (1 + 1e-9) + 1e-15;
        prev = pen;
      }
      t.require("penalty monotone in alpha", monotone);
    }
  }
  return t.outcome();
}

Outcome stationarity_loop() {
  Tally t;
  std::mt19937_64 rng(7);
  const Index n = 8;
  const Gso s = make_gso(oracle::random_graph(n, 0.4, rng, true, true), GsoVariant::combinatorial_laplacian);
  const SpectralDecomposition d = decompose(s);
  Vector psd(n);
  for (Index i = 0; i < n; ++i) psd(i) = std::exp(-0.5 * d.values(i)) + 0.05;
  const SignalMatrix xs = synthesize_stationary(d, psd, 10000, 2024);
  const PsdEstimate est = periodogram(s, d, xs);
  t.upper("periodogram max rel err", ((est.values - psd).array() / psd.array()).abs().maxCoeff(), 0.1);
  t.upper("commutation score", stationarity_score(sample_covariance(xs).matrix, s), 0.1);

  const double sigma2 = psd.mean();
  const Index trials = 2000;
  const SignalMatrix clean = synthesize_stationary(d, psd, trials, 31);
  double noisy = 0.0, denoised = 0.0;
  for (Index k = 0; k < trials; ++k) {
    CounterRng r(32, static_cast<std::uint64_t>(k));
    Vector noise(n);
    for (Index i = 0; i < n; ++i) noise(i) = std::sqrt(sigma2) * r.normal();
    noisy += noise.squaredNorm();
    denoised += (wiener_denoise(d, psd, sigma2, clean.col(k) + noise) - clean.col(k)).squaredNorm();
  }
  t.upper("Wiener MSE / noisy MSE", denoised / noisy, 0.9);
  return t.outcome();
}

double best_threshold_f1(const Graph& truth, const Matrix& w) {
  double best = 0.0;
  for (Index i = 0; i < w.rows(); ++i)
    for (Index j = i + 1; j < w.cols(); ++j)
      if (w(i, j) != 0.0) best = std::max(best, support_f1(truth, w, std::abs(w(i, j)) * (1 - 1e-12)).f1);
  return best;
}

Outcome topology_recovery() {
  Tally t;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    const Graph g = oracle::two_cluster_graph(20, 0.3, 2, rng);
    const SpectralDecomposition d = decompose(make_gso(g, GsoVariant::combinatorial_laplacian));
    Vector psd(d.size());
    for (Index i = 0; i < d.size(); ++i) psd(i) = d.values(i) < 1e-9 ? 1.0 : 1.0 / d.values(i);
    SmoothLaplacianOptions opt;
    opt.beta = 100.0;
    const LearnedGraph lg = learn_smooth_laplacian(synthesize_stationary(d, psd, 500, seed), opt);
    Matrix w = -lg.gso.matrix();
    w.diagonal().setZero();
    t.lower("smooth F1", best_threshold_f1(g, w), 0.8);
  }

  std::mt19937_64 rng(11);
  int templates = 0;
  while (templates < 5) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Edge> edges;
    for (Index i = 0; i < 8; ++i)
      for (Index j = i + 1; j < 8; ++j)
        if (u(rng) < 4.0 / 7.0) edges.push_back({i, j, 0.5 + u(rng)});
    const Graph g = build_graph(8, edges, false);
    if (connected_components(g) != 1) continue;
    const LearnedGraph lg =
        spectral_template_adjacency(jacobi_eigen(make_gso(g, GsoVariant::adjacency).matrix()).vectors);
    t.lower("template F1", support_f1(g, lg.graph).f1, 0.9);
    ++templates;
  }

  const Index n = 8;
  Matrix q = 2.0 * Matrix::Identity(n, n);
  for (Index i = 0; i + 1 < n; ++i) q(i, i + 1) = q(i + 1, i) = -0.8;
  const SymmetricEigen e = jacobi_eigen(q);
  const Matrix root = e.vectors * e.values.cwiseInverse().cwiseSqrt().asDiagonal() * e.vectors.transpose();
  Matrix xs(n, 10000);
  for (Index k = 0; k < xs.cols(); ++k) {
    CounterRng r(77, static_cast<std::uint64_t>(k));
    Vector z(n);
    for (Index i = 0; i < n; ++i) z(i) = r.normal();
    xs.col(k) = root * z;
  }
  std::vector<Edge> chain;
  for (Index i = 0; i + 1 < n; ++i) chain.push_back({i, i + 1, 1.0});
  t.lower("precision chain F1", support_f1(build_graph(n, chain, false), precision_graph(xs, 1e-6, 0.4)).f1, 1.0);
  return t.outcome();
}

std::vector<double> sorted(const Vector& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

double multiset_gap(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return INFINITY;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

Outcome graph_time() {
  Tally t;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix sg = oracle::random_symmetric(3 + trial % 4, rng);
    const Matrix st = oracle::random_symmetric(3 + trial % 3, rng);
    const Eigen::SelfAdjointEigenSolver<Matrix> eg(sg), et(st);
    std::vector<double> sums, prods;
    for (Index i = 0; i < sg.rows(); ++i)
      for (Index j = 0; j < st.rows(); ++j) {
        sums.push_back(eg.eigenvalues()(i) + et.eigenvalues()(j));
        prods.push_back(eg.eigenvalues()(i) * et.eigenvalues()(j));
      }
    const Gso g = Gso::custom(sg), tm = Gso::custom(st);
    const auto cart = decompose(Gso::custom(product_gso(g, tm, ProductKind::cartesian).matrix));
    const auto kron = decompose(Gso::custom(product_gso(g, tm, ProductKind::kronecker).matrix));
    t.upper("cartesian spectrum", multiset_gap(sorted(cart.values), sums), 1e-8);
    t.upper("kronecker spectrum", multiset_gap(sorted(kron.values), prods), 1e-8);
  }

  const Gso g = make_gso(oracle::random_graph(6, 0.5, rng, true, true), GsoVariant::combinatorial_laplacian);
  const auto dg = decompose(g);
  const auto dt = decompose(make_gso(directed_cycle(8), GsoVariant::adjacency));
  Matrix x(6, 8);
  for (Index j = 0; j < 8; ++j) x.col(j) = oracle::random_vector(6, rng);
  const CMatrix xhat = joint_gft(dg, dt, x);
  // Explicit Kronecker product built entry by entry.
  CMatrix big(48, 48);
  for (Index a = 0; a < 6; ++a)
    for (Index b = 0; b < 8; ++b)
      for (Index c = 0; c < 6; ++c)
        for (Index e = 0; e < 8; ++e) big(a * 8 + b, c * 8 + e) = dg.cinverse(a, c) * oracle::dft_matrix(8)(b, e);
  CVector vx(48);
  for (Index a = 0; a < 6; ++a)
    for (Index b = 0; b < 8; ++b) vx(a * 8 + b) = x(a, b);
  const CVector ref = big * vx;
  double gap = 0.0;
  for (Index a = 0; a < 6; ++a)
    for (Index b = 0; b < 8; ++b) gap = std::max(gap, std::abs(xhat(a, b) - ref(a * 8 + b)));
  t.upper("joint GFT vs Kronecker", gap, 1e-10);

  Matrix taps(2, 3);
  taps << 0.5, 0.2, -0.1, 0.2, -0.15, 0.05;
  for (int trial = 0; trial < 5; ++trial) {
    const Graph gr = oracle::random_graph(8, 0.4, rng, true, true);
    const Matrix s = Matrix::Identity(8, 8) - make_gso(gr, GsoVariant::normalized_laplacian).matrix();
    std::vector<Matrix> h;
    for (Index p = 0; p < 2; ++p) h.push_back(taps(p, 0) * Matrix::Identity(8, 8) + taps(p, 1) * s + taps(p, 2) * s * s);
    Matrix xs(8, 200);
    xs.col(0) = oracle::random_vector(8, rng);
    xs.col(1) = oracle::random_vector(8, rng);
    for (Index k = 2; k < 200; ++k) xs.col(k) = h[0] * xs.col(k - 1) + h[1] * xs.col(k - 2);
    const VarModel fit = fit_graph_var(xs, Gso::custom(s), 2, 2);
    t.upper("graph-VAR tap err", (fit.taps - taps).cwiseAbs().maxCoeff(), 1e-6);
  }

  const Index n = 5, len = 300;
  // Stable planted lag (spectral radius 0.6) so that the series stays bounded
  // and the least-squares oracle is well conditioned.
  Matrix a1 = oracle::random_symmetric(n, rng);
  a1 *= 0.6 / Eigen::SelfAdjointEigenSolver<Matrix>(a1).eigenvalues().cwiseAbs().maxCoeff();
  Matrix xs(n, len);
  xs.col(0) = oracle::random_vector(n, rng);
  for (Index k = 1; k < len; ++k) xs.col(k) = a1 * xs.col(k - 1) + oracle::random_vector(n, rng);
  const VarModel m = fit_structural_var(xs, 1, {});
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    Matrix z(2 * n - 1, len - 1);
    Vector y(len - 1);
    for (Index k = 1; k < len; ++k) {
      Index r = 0;
      for (Index j = 0; j < n; ++j)
        if (j != i) z(r++, k - 1) = xs(j, k);
      for (Index j = 0; j < n; ++j) z(r++, k - 1) = xs(j, k - 1);
      y(k - 1) = xs(i, k);
    }
    const Vector coef = (z * z.transpose()).ldlt().solve(z * y);
    Index r = 0;
    for (Index j = 0; j < n; ++j)
      if (j != i) worst = std::max(worst, std::abs(m.lags[0](i, j) - coef(r++)));
    for (Index j = 0; j < n; ++j) worst = std::max(worst, std::abs(m.lags[1](i, j) - coef(r++)));
  }
  t.upper("structural-VAR vs LS", worst, 1e-6);
  return t.outcome();
}

Outcome cli_determinism() {
  Tally t;
  cli::Sandbox sb("acceptance");
  sb.fixtures();
  const auto prep = [&](const std::string& args) {
    const auto r = sb.run(args);
    t.require("prep: " + args, r.code == 0);
  };
  prep("--seed 3 synth --graph p6.csv --psd-kernel heat:1 --m 2000 --out-dir prep/smooth");
  prep("--seed 3 synth --graph p6.csv --psd-kernel rect:1.5 --m 1 --out-dir prep/band");
  prep("var fit --graph p6.csv --series series.csv --p 1 --l 1 --out-dir prep/gvar");
  prep("var fit --mode structural --series series.csv --p 1 --lambda 0.1 --out-dir prep/svar");

  const std::vector<std::string> commands = {
      "spectrum --graph k3.csv --variant laplacian",
      "spectrum --graph cycle4.csv --variant adjacency --signal e0.csv",
      "filter --graph cycle4.csv --variant adjacency --taps 0,1 --signal e0.csv",
      "filter --graph p6.csv --response 1,0.8,0.6,0.4,0.2,0 --signal d2.csv",
      "filter --graph p6.csv --kernel heat:0.5 --signal d2.csv",
      "filter --graph p6.csv --kernel heat:0.5 --chebyshev 20 --signal d2.csv",
      "filter --graph p6.csv --iir 1,0.5 --signal d2.csv",
      "interpolate --graph p6.csv --mode bandlimited --k 3 --samples s.json --signal prep/band/signals.csv",
      "interpolate --graph p6.csv --mode regularized --alpha 0.5 --k 3 --select 3 --signal prep/band/signals.csv",
      "ssl --graph p6.csv --labels labels.csv --alpha 1",
      "sources --graph p6.csv --signal d2.csv --k 1 --kernel heat:0.5",
      "psd --graph p6.csv --signals prep/smooth/signals.csv",
      "wiener --graph p6.csv --psd prep/smooth/psd.json --noise 0.3 --signal prep/band/signals.csv",
      "--seed 42 synth --graph p6.csv --psd-kernel heat:1 --m 50",
      "learn --method smooth --signals prep/smooth/signals.csv --beta 10 --truth p6.csv",
      "learn --method corr --signals prep/smooth/signals.csv --tau 0.3 --truth p6.csv",
      "learn --method precision --signals prep/smooth/signals.csv --tau 0.3 --truth p6.csv",
      "learn --method template --signals prep/smooth/signals.csv --rank-tol 1e-2 --feasibility-tol 1e-1",
      "var fit --graph p6.csv --series series.csv --p 1 --l 1",
      "var fit --mode structural --series series.csv --p 1 --lambda 0.1",
      "var predict --graph p6.csv --series series.csv --model prep/gvar/model.json",
      "var predict --series series.csv --model prep/svar/model.json",
      "product --graph p6.csv --time-cycle 4 --kind strong",
      "product --graph p6.csv --time-graph k3.csv --time-variant laplacian --kind cartesian",
      "jointgft --graph p6.csv --series series.csv",
  };
  std::set<std::string> covered;
  int identical = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const std::string a = "runs/" + std::to_string(i) + "a", b = "runs/" + std::to_string(i) + "b";
    const auto ra = sb.run(commands[i] + " --out-dir " + a);
    // The second run also caps the thread count.
    const auto rb = sb.run(commands[i] + " --out-dir " + b, "GSPKIT_THREADS=1");
    const auto fa = cli::outputs(sb.path(a)), fb = cli::outputs(sb.path(b));
    const bool same = ra.code == 0 && rb.code == 0 && !fa.empty() && fa == fb &&
                      std::filesystem::exists(sb.path(a + "/metadata.json"));
    t.require("deterministic: " + commands[i], same);
    identical += same;
    std::string word;
    for (std::size_t p = 0; p < commands[i].size() && word.empty();) {
      const auto q = commands[i].find(' ', p);
      std::string tok = commands[i].substr(p, q - p);
      if (tok.rfind("--", 0) == 0)
        p = commands[i].find(' ', q + 1) + 1;  // skip a global option and its value
      else
        word = tok;
    }
    covered.insert(word);
  }
  t.require("all 12 subcommands covered", covered.size() == 12);

  struct ErrorCase {
    std::string args;
    int code;
    const char* kind;
  };
  sb.graph("tree", 5, false, "0,1,1\n1,2,1\n1,3,1\n3,4,1\n");
  sb.write("tree_s.json", "{\"n\": 5, \"indices\": [1, 3, 4]}\n");
  sb.write("tree_v.csv", "1\n2\n3\n");
  sb.write("bad.csv", "0,1,1\n");
  sb.write("bad.json", "{\"n\": 2, \"directed\": false}\n");
  const std::vector<ErrorCase> errors = {
      {"", 2, "usage"},
      {"nosuchcommand", 2, "usage"},
      {"spectrum --graph missing.csv", 2, "usage"},
      {"filter --graph k3.csv --signal e0.csv", 2, "usage"},
      {"learn --method magic --signals series.csv", 2, "usage"},
      {"spectrum --graph bad.csv", 3, "data"},
      {"filter --graph k3.csv --taps 1 --signal e0.csv", 3, "data"},
      {"spectrum --graph cycle4.csv --variant laplacian", 3, "data"},
      {"filter --graph cycle4.csv --variant adjacency --iir 1,-1 --signal e0.csv", 4, "numerical"},
      {"interpolate --graph tree.csv --mode bandlimited --k 3 --samples tree_s.json --values tree_v.csv", 4,
       "numerical"},
      {"learn --method template --signals series.csv", 4, "numerical"},
  };
  int coded = 0;
  for (const auto& e : errors) {
    const auto r = sb.run(e.args + " --out-dir err");
    const bool ok = r.code == e.code && cli::one_error_line(r.err, e.kind);
    t.require("exit " + std::to_string(e.code) + ": '" + e.args + "' (got " + std::to_string(r.code) + ")", ok);
    coded += ok;
  }
  Outcome o = t.outcome();
  o.detail = std::to_string(identical) + "/" + std::to_string(commands.size()) + " runs identical, " +
             std::to_string(coded) + "/" + std::to_string(errors.size()) + " error codes" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"DFT equivalence", dft_equivalence},
      {"shift semantics", shift_semantics},
      {"spectral contracts", spectral_contracts},
      {"polynomial/spectral filter equivalence", filter_equivalence},
      {"sampling theorem", sampling_theorem},
      {"regularized interpolation closed form", regularized_closed_form},
      {"stationarity loop", stationarity_loop},
      {"topology recovery", topology_recovery},
      {"graph-time models", graph_time},
      {"CLI determinism and exit codes", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
