// gspkit: batch front end over the library. Each subcommand reads CSV/JSON
// inputs, writes its results plus metadata.json into --out-dir and exits with
// 0 on success, 2 on usage errors, 3 on data errors and 4 on numerical errors.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gspkit/gspkit.hpp"
#include "gspkit/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gspkit;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Run {
  fs::path out_dir = ".";
  std::uint64_t seed = 0;
  bool quiet = false;
  json results = json::object();
  std::vector<std::string> outputs;

  fs::path out(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }
  void note(const std::string& msg) const {
    if (!quiet) std::cerr << "gspkit: " << msg << '\n';
  }
};

// Options shared by every subcommand; each subcommand registers the subset
// it accepts.
struct Options {
  std::string graph;
  std::string variant = "laplacian";
  std::string signal;
  std::string signals;
  std::string series;
  std::string values;
  std::string samples;
  std::string labels;
  std::string psd;
  std::string model;
  std::string truth;
  std::string filter;
  std::string time_graph;
  std::string time_variant = "adjacency";
  std::string kernel;
  std::string psd_kernel;
  std::string mode;
  std::string method;
  std::string action;
  std::string kind = "cartesian";
  std::vector<double> taps;
  std::vector<double> response;
  std::vector<double> iir;
  std::vector<double> interval;
  int chebyshev = -1;
  Index k = 0;
  Index select = 0;
  Index m = 1;
  Index p = 1;
  Index l = 1;
  Index time_cycle = 0;
  double alpha = 1.0;
  double beta = 1.0;
  double trace = 0.0;
  double tau = 0.0;
  double ridge = 0.0;
  double noise = 0.0;
  double lambda = 0.0;
  double rank_tol = 1e-10;
  double feasibility_tol = 1e-8;
  int max_iters = 0;
  bool causal = false;
};

const std::vector<std::string> kVariants = {"adjacency",           "laplacian",
                                            "combinatorial-laplacian", "normalized-laplacian",
                                            "random-walk-laplacian"};

// Options whose values are file paths; they are listed under "inputs" in the
// metadata and the rest under "parameters".
const std::set<std::string> kPathOptions = {"graph", "signal", "signals", "series", "values",
                                            "samples", "labels", "psd", "model", "truth",
                                            "filter", "time-graph"};

Gso load_gso(const std::string& path, const std::string& variant) {
  return make_gso(io::read_graph(path), parse_gso_variant(variant));
}

Matrix load_signals(const std::string& path, Index n, const char* what) {
  Matrix x = io::read_matrix(path);
  if (x.rows() != n)
    throw DataError(std::string(what) + " has " + std::to_string(x.rows()) +
                    " rows, expected " + std::to_string(n));
  return x;
}

Vector load_vector(const std::string& path, Index n, const char* what) {
  const Matrix x = load_signals(path, n, what);
  if (x.cols() != 1) throw DataError(std::string(what) + " must be a single column");
  return x.col(0);
}

SpectralKernel parse_kernel(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("kernel must be heat:<tau> or rect:<cutoff>");
  const std::string name = spec.substr(0, colon);
  double param = 0.0;
  try {
    std::size_t used = 0;
    param = std::stod(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("bad kernel parameter in '" + spec + "'");
  }
  if (name == "heat") return heat_kernel(param);
  if (name == "rect") return rectangular_kernel(param);
  throw UsageError("unknown kernel '" + name + "'");
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> iota(Index n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i);
  return xs;
}

Matrix dense_of(const Graph& g) {
  Matrix w = Matrix::Zero(g.n_vertices(), g.n_vertices());
  for (const auto& e : g.edges()) {
    w(e.src, e.dst) = e.weight;
    w(e.dst, e.src) = e.weight;
  }
  return w;
}

// F1 against the truth for every threshold that changes the support of |W|.
void write_f1_sweep(Run& run, const Graph& truth, const Matrix& w) {
  if (truth.n_vertices() != w.rows())
    throw DataError("truth graph has a different vertex count");
  std::vector<double> levels{0.0};
  for (Index i = 0; i < w.rows(); ++i)
    for (Index j = i + 1; j < w.cols(); ++j)
      if (std::abs(w(i, j)) > 0.0) levels.push_back(std::abs(w(i, j)));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> taus, f1s;
  double best = 0.0, best_tau = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    // Midpoints keep the reported threshold away from exact entry values.
    const double tau = i + 1 < levels.size() ? 0.5 * (levels[i] + levels[i + 1]) : levels[i];
    const double f1 = support_f1(truth, w, i == 0 ? 0.0 : tau).f1;
    const double t = i == 0 ? 0.0 : tau;
    taus.push_back(t);
    f1s.push_back(f1);
    if (f1 > best) {
      best = f1;
      best_tau = t;
    }
  }
  io::write_table(run.out("f1_sweep.csv"), "tau", "f1", taus, f1s);
  run.results["best_f1"] = best;
  run.results["best_tau"] = best_tau;
}

SamplingSet labeled_set(Index n, const io::Labels& labels, Vector& values) {
  std::vector<std::size_t> order(labels.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return labels.vertices[a] < labels.vertices[b]; });
  std::vector<Index> idx;
  values.resize(static_cast<Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    idx.push_back(labels.vertices[order[i]]);
    values(static_cast<Index>(i)) = labels.values[order[i]];
  }
  return SamplingSet(n, std::move(idx));
}

// --- subcommands -----------------------------------------------------------

void cmd_spectrum(const Options& o, Run& run) {
  const Gso s = load_gso(o.graph, o.variant);
  const auto d = decompose(s);
  const Index n = d.size();
  Matrix ev(n, d.real ? 1 : 2);
  for (Index i = 0; i < n; ++i) {
    ev(i, 0) = d.cvalues(i).real();
    if (!d.real) ev(i, 1) = d.cvalues(i).imag();
  }
  io::write_matrix(run.out("eigenvalues.csv"), ev);
  std::vector<double> mags(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::abs(d.cvalues(i));
  io::write_table(run.out("eigenvalue_plot.csv"), "index", "magnitude", iota(n), mags);

  CVector coeffs(0);
  if (!o.signal.empty()) {
    const Vector x = load_vector(o.signal, n, "signal");
    coeffs = gft_complex(d, x.cast<Complex>());
    std::vector<double> cm(static_cast<std::size_t>(n));
    for (Index r = 0; r < n; ++r)
      cm[static_cast<std::size_t>(r)] = std::abs(coeffs(d.ordering[static_cast<std::size_t>(r)]));
    io::write_table(run.out("gft_plot.csv"), "frequency_rank", "magnitude", iota(n), cm);
    run.results["total_variation"] = total_variation(s, x);
  }
  io::write_json(run.out("spectrum.json"), io::spectrum_json(d, coeffs));
  run.results["n"] = n;
  run.results["real"] = d.real;
  run.results["has_repeated"] = d.has_repeated;
}

void cmd_filter(const Options& o, Run& run) {
  const int forms = !o.taps.empty() + !o.response.empty() + !o.kernel.empty() + !o.iir.empty() +
                    !o.filter.empty();
  if (forms != 1)
    throw UsageError("filter needs exactly one of --taps, --response, --kernel, --iir, --filter");
  if (o.chebyshev >= 0 && o.kernel.empty()) throw UsageError("--chebyshev needs --kernel");
  if (!o.interval.empty() && (o.interval.size() != 2 || o.chebyshev < 0))
    throw UsageError("--interval takes lo,hi and needs --chebyshev");

  const Gso s = load_gso(o.graph, o.variant);
  const Matrix x = load_signals(o.signal, s.size(), "signal");
  Matrix y(x.rows(), x.cols());
  GraphFilter f;
  std::optional<SpectralDecomposition> d;

  if (!o.taps.empty()) {
    f = GraphFilter::from_taps(o.taps);
    y = apply_polynomial(s, o.taps, x);
  } else if (!o.iir.empty()) {
    f = GraphFilter::from_denominator(o.iir);
    for (Index c = 0; c < x.cols(); ++c) y.col(c) = apply_iir(s, o.iir, x.col(c));
  } else if (!o.kernel.empty() && o.chebyshev >= 0) {
    const auto kernel = parse_kernel(o.kernel);
    const Interval iv = o.interval.empty() ? gershgorin_interval(s)
                                           : Interval{o.interval[0], o.interval[1]};
    f = GraphFilter::from_chebyshev(chebyshev_fit(kernel, o.chebyshev, iv), iv);
    for (Index c = 0; c < x.cols(); ++c)
      y.col(c) = chebyshev_apply(s, f.coefficients, iv, x.col(c));
  } else {
    if (!o.filter.empty()) {
      const json j = io::read_json(o.filter);
      if (j.value("form", std::string()) == "response") d = decompose(s);
      f = io::filter_from_json(j, d ? &*d : nullptr);
    } else {
      d = decompose(s);
      f = !o.kernel.empty() ? GraphFilter::from_response(*d, sample_kernel(*d, parse_kernel(o.kernel)))
                            : GraphFilter::from_response(*d, o.response);
    }
    for (Index c = 0; c < x.cols(); ++c) y.col(c) = apply_filter(s, f, x.col(c), d ? &*d : nullptr);
  }
  io::write_matrix(run.out("filtered.csv"), y);
  io::write_json(run.out("filter.json"), io::filter_json(f));
  if (f.form == FilterForm::response)
    io::write_table(run.out("response_plot.csv"), "index", "response",
                    iota(static_cast<Index>(f.coefficients.size())), f.coefficients);
}

GraphFilter regularizer_filter(const Options& o, const Gso& s,
                               std::optional<SpectralDecomposition>& d) {
  if (!o.taps.empty() && !o.kernel.empty()) throw UsageError("give --taps or --kernel, not both");
  if (!o.taps.empty()) return GraphFilter::from_taps(o.taps);
  d = decompose(s);
  return GraphFilter::from_response(*d, sample_kernel(*d, parse_kernel(o.kernel.empty() ? "heat:1" : o.kernel)));
}

void cmd_interpolate(const Options& o, Run& run) {
  if (o.mode != "bandlimited" && o.mode != "regularized")
    throw UsageError("--mode must be bandlimited or regularized");
  if (o.samples.empty() == (o.select == 0)) throw UsageError("give exactly one of --samples, --select");
  if (o.signal.empty() == o.values.empty()) throw UsageError("give exactly one of --signal, --values");
  if (o.mode == "bandlimited" && o.k <= 0) throw UsageError("bandlimited mode needs --k");
  if (o.select > 0 && o.k <= 0) throw UsageError("--select needs --k");

  const Gso s = load_gso(o.graph, o.variant);
  const Index n = s.size();
  std::optional<SpectralDecomposition> d;
  std::optional<BandlimitedModel> band;
  if (o.k > 0) {
    d = decompose(s);
    band.emplace(*d, o.k);
  }

  std::optional<SamplingSet> m;
  if (!o.samples.empty()) {
    m = io::sampling_set_from_json(io::read_json(o.samples));
    if (m->ambient_size() != n) throw DataError("sampling set is for a different vertex count");
  } else {
    const auto sel = select_sampling_set(*band, o.select);
    m = sel.set;
  }
  if (band) run.results["sigma_min"] = sampling_quality(*band, *m);

  Vector full;
  Vector xm;
  if (!o.signal.empty()) {
    full = load_vector(o.signal, n, "signal");
    xm = sample(full, *m);
  } else {
    xm = load_vector(o.values, m->size(), "values");
  }

  Vector rec;
  if (o.mode == "bandlimited") {
    rec = interpolate_bandlimited(*band, *m, xm);
  } else {
    const GraphFilter f = regularizer_filter(o, s, d);
    rec = interpolate_regularized(s, f, o.alpha, *m, xm, d ? &*d : nullptr);
  }
  io::write_matrix(run.out("reconstruction.csv"), rec);
  io::write_json(run.out("sampling.json"), io::sampling_set_json(*m));
  if (full.size() > 0) {
    run.results["reconstruction_error"] = (rec - full).norm();
    run.results["relative_error"] = full.norm() > 0 ? (rec - full).norm() / full.norm() : 0.0;
  }
}

void cmd_ssl(const Options& o, Run& run) {
  const Gso s = load_gso(o.graph, o.variant);
  Vector values;
  const SamplingSet m = labeled_set(s.size(), io::read_labels(o.labels), values);
  const SslResult r = ssl_labels(s, o.alpha, m, values);
  io::write_matrix(run.out("scores.csv"), r.scores);
  Vector classes(static_cast<Index>(r.classes.size()));
  for (std::size_t i = 0; i < r.classes.size(); ++i) classes(static_cast<Index>(i)) = r.classes[i];
  io::write_matrix(run.out("classes.csv"), classes);
  run.results["labeled"] = m.size();
}

void cmd_sources(const Options& o, Run& run) {
  if (o.k <= 0) throw UsageError("sources needs --k");
  const Gso s = load_gso(o.graph, o.variant);
  const Vector x = load_vector(o.signal, s.size(), "signal");
  std::optional<SpectralDecomposition> d;
  const GraphFilter f = regularizer_filter(o, s, d);
  const Matrix h = filter_matrix(s, f, d ? &*d : nullptr);
  const SourceEstimate e = identify_sources(h, x, o.k);
  io::write_json(run.out("sources.json"),
                 json{{"support", e.support},
                      {"values", to_std(e.values)},
                      {"residual", e.residual},
                      {"mutual_coherence", e.mutual_coherence}});
  io::write_table(run.out("residual_plot.csv"), "atoms", "residual",
                  iota(static_cast<Index>(e.residual_trace.size())), e.residual_trace);
  run.results["residual"] = e.residual;
}

void cmd_psd(const Options& o, Run& run) {
  const Gso s = load_gso(o.graph, o.variant);
  const auto d = decompose(s);
  const Matrix xs = load_signals(o.signals, s.size(), "signals");
  const PsdEstimate p = periodogram(s, d, xs);
  io::write_json(run.out("psd.json"), io::psd_json(p));
  io::write_table(run.out("psd_plot.csv"), "index", "psd", iota(p.values.size()), to_std(p.values));
  run.results["stationarity_score"] = stationarity_score(sample_covariance(xs).matrix, s);
}

void cmd_wiener(const Options& o, Run& run) {
  if (o.noise < 0.0) throw UsageError("--noise must be nonnegative");
  const Gso s = load_gso(o.graph, o.variant);
  const auto d = decompose(s);
  const PsdEstimate p = io::psd_from_json(io::read_json(o.psd));
  if (p.values.size() != s.size()) throw DataError("PSD length does not match the graph");
  const Matrix y = load_signals(o.signal, s.size(), "signal");
  Matrix out(y.rows(), y.cols());
  for (Index c = 0; c < y.cols(); ++c) out.col(c) = wiener_denoise(d, p.values, o.noise, y.col(c));
  io::write_matrix(run.out("denoised.csv"), out);
  io::write_table(run.out("gain_plot.csv"), "index", "gain", iota(p.values.size()),
                  to_std(wiener_gain(p.values, o.noise)));
}

void cmd_synth(const Options& o, Run& run) {
  if (o.psd.empty() == o.psd_kernel.empty()) throw UsageError("give exactly one of --psd, --psd-kernel");
  if (o.m <= 0) throw UsageError("--m must be positive");
  const Gso s = load_gso(o.graph, o.variant);
  const auto d = decompose(s);
  PsdEstimate planted;
  if (!o.psd.empty()) {
    planted = io::psd_from_json(io::read_json(o.psd));
    if (planted.values.size() != s.size()) throw DataError("PSD length does not match the graph");
  } else {
    const auto v = sample_kernel(d, parse_kernel(o.psd_kernel));
    planted.values = Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
  }
  planted.sample_count = 0;
  const Matrix xs = synthesize_stationary(d, planted.values, o.m, run.seed);
  io::write_matrix(run.out("signals.csv"), xs);
  io::write_json(run.out("psd.json"), io::psd_json(planted));
  io::write_table(run.out("psd_plot.csv"), "index", "psd", iota(planted.values.size()),
                  to_std(planted.values));
}

json diagnostics_json(const LearnedGraph& g) {
  const auto& d = g.diagnostics;
  return json{{"iterations", d.iterations},
              {"converged", d.converged},
              {"row_sum_residual", d.row_sum_residual},
              {"max_off_diagonal", d.max_off_diagonal},
              {"trace_residual", d.trace_residual},
              {"constraint_residual", d.constraint_residual},
              {"objective_trace", g.objective_trace}};
}

void cmd_learn(const Options& o, Run& run) {
  const Matrix xs = io::read_matrix(o.signals);
  std::optional<Graph> truth;
  if (!o.truth.empty()) {
    truth = io::read_graph(o.truth);
    if (truth->n_vertices() != xs.rows()) throw DataError("truth graph has a different vertex count");
  }
  Graph learned;
  Matrix weights;
  if (o.method == "smooth") {
    SmoothLaplacianOptions opt;
    opt.beta = o.beta;
    opt.trace = o.trace;
    if (o.max_iters > 0) opt.max_iters = o.max_iters;
    const LearnedGraph g = learn_smooth_laplacian(xs, opt);
    learned = g.graph;
    weights = g.gso.matrix();
    io::write_json(run.out("diagnostics.json"), diagnostics_json(g));
    io::write_table(run.out("objective_plot.csv"), "iteration", "objective",
                    iota(static_cast<Index>(g.objective_trace.size())), g.objective_trace);
  } else if (o.method == "corr") {
    learned = correlation_graph(xs, o.tau);
    weights = dense_of(correlation_graph(xs, -1.0));
  } else if (o.method == "precision") {
    learned = precision_graph(xs, o.ridge, o.tau);
    weights = dense_of(precision_graph(xs, o.ridge, -1.0));
  } else if (o.method == "template") {
    const SymmetricEigen e = jacobi_eigen(sample_covariance(xs).matrix);
    SpectralTemplateOptions opt;
    opt.rank_tol = o.rank_tol;
    opt.feasibility_tol = o.feasibility_tol;
    if (o.max_iters > 0) opt.max_iters = o.max_iters;
    const LearnedGraph g = spectral_template_adjacency(e.vectors, opt);
    learned = g.graph;
    weights = g.gso.matrix();
    io::write_json(run.out("diagnostics.json"), diagnostics_json(g));
    io::write_table(run.out("objective_plot.csv"), "iteration", "objective",
                    iota(static_cast<Index>(g.objective_trace.size())), g.objective_trace);
  } else {
    throw UsageError("--method must be smooth, corr, precision or template");
  }
  io::write_graph(run.out("learned.csv"), learned);
  run.outputs.push_back(io::sidecar_path("learned.csv").string());
  run.results["edges"] = learned.edges().size();
  if (truth) {
    run.results["f1"] = support_f1(*truth, learned).f1;
    write_f1_sweep(run, *truth, weights);
  }
}

void cmd_var(const Options& o, Run& run) {
  if (o.action != "fit" && o.action != "predict") throw UsageError("var action must be fit or predict");
  const Matrix xs = io::read_matrix(o.series);
  if (o.action == "fit") {
    const VarMode mode = parse_var_mode(o.mode);
    VarModel model;
    if (mode == VarMode::graph_var) {
      if (o.graph.empty()) throw UsageError("graph-var needs --graph");
      const Gso s = load_gso(o.graph, o.variant);
      if (s.size() != xs.rows()) throw DataError("series has a different vertex count than the graph");
      model = fit_graph_var(xs, s, o.p, o.l, o.causal);
      run.results["condition"] = model.condition;
    } else {
      StructuralVarOptions opt;
      opt.lambda = o.lambda;
      if (o.max_iters > 0) opt.max_iters = o.max_iters;
      model = fit_structural_var(xs, o.p, opt);
      run.results["spectral_radius"] = model.spectral_radius;
      run.results["iterations"] = model.iterations;
      io::write_table(run.out("objective_plot.csv"), "iteration", "objective",
                      iota(static_cast<Index>(model.objective_trace.size())), model.objective_trace);
    }
    run.results["residual"] = model.residual;
    io::write_json(run.out("model.json"), io::var_json(model));
  } else {
    if (o.model.empty()) throw UsageError("var predict needs --model");
    const VarModel model = io::var_from_json(io::read_json(o.model));
    Vector next;
    if (model.mode == VarMode::graph_var) {
      if (o.graph.empty()) throw UsageError("graph-var prediction needs --graph");
      const Gso s = load_gso(o.graph, o.variant);
      if (s.size() != xs.rows()) throw DataError("series has a different vertex count than the graph");
      next = predict_var(model, &s, xs);
    } else {
      next = predict_var(model, nullptr, xs);
    }
    io::write_matrix(run.out("prediction.csv"), next);
  }
}

Gso time_gso(const Options& o, Index default_len) {
  if (o.time_cycle > 0 && !o.time_graph.empty())
    throw UsageError("give --time-cycle or --time-graph, not both");
  if (!o.time_graph.empty()) return load_gso(o.time_graph, o.time_variant);
  const Index t = o.time_cycle > 0 ? o.time_cycle : default_len;
  if (t <= 0) throw UsageError("time axis needs --time-cycle or --time-graph");
  return make_gso(directed_cycle(t), GsoVariant::adjacency);
}

void cmd_product(const Options& o, Run& run) {
  const Gso g = load_gso(o.graph, o.variant);
  const Gso t = time_gso(o, 0);
  const ProductGso p = product_gso(g, t, parse_product_kind(o.kind));
  io::write_matrix(run.out("product.csv"), p.matrix);
  const Gso ps = Gso::custom(p.matrix);
  if (ps.is_symmetric()) {
    const auto d = decompose(ps);
    io::write_matrix(run.out("eigenvalues.csv"), d.values);
    io::write_table(run.out("eigenvalue_plot.csv"), "index", "eigenvalue", iota(d.size()),
                    to_std(d.values));
  }
  run.results["size"] = p.matrix.rows();
  run.results["symmetric"] = ps.is_symmetric();
}

void cmd_jointgft(const Options& o, Run& run) {
  const Gso g = load_gso(o.graph, o.variant);
  const Matrix x = load_signals(o.series, g.size(), "series");
  const Gso t = time_gso(o, x.cols());
  if (t.size() != x.cols()) throw DataError("series length does not match the time graph");
  const auto dg = decompose(g);
  const auto dt = decompose(t);
  const CMatrix xh = joint_gft(dg, dt, x);
  io::write_matrix(run.out("joint_re.csv"), xh.real());
  io::write_matrix(run.out("joint_im.csv"), xh.imag());
  const Index n = xh.rows(), tt = xh.cols();
  std::vector<double> mags(static_cast<std::size_t>(n * tt));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < tt; ++j) mags[static_cast<std::size_t>(i * tt + j)] = std::abs(xh(i, j));
  io::write_table(run.out("joint_plot.csv"), "vec_index", "magnitude", iota(n * tt), mags);
  run.results["energy"] = xh.squaredNorm();
}

// --- plumbing --------------------------------------------------------------

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

int fail(const char* kind, const std::string& msg, int code) {
  std::cerr << "gspkit: error[" << kind << "]: " << one_line(msg) << '\n';
  return code;
}

json collect_options(const CLI::App* sub, bool paths) {
  json j = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help") continue;
    if (opt->count() == 0 && opt->get_default_str().empty()) continue;
    std::string key = opt->get_lnames().empty() ? name : opt->get_lnames().front();
    if (paths != (kPathOptions.count(key) > 0)) continue;
    const auto& res = opt->count() > 0 ? opt->results()
                                       : std::vector<std::string>{opt->get_default_str()};
    if (opt->get_type_size() == 0 && opt->count() > 0) {
      j[key] = true;
    } else if (res.size() == 1) {
      j[key] = res.front();
    } else {
      j[key] = res;
    }
  }
  return j;
}

void apply_thread_cap() {
  const char* env = std::getenv("GSPKIT_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0) throw UsageError("GSPKIT_THREADS must be a nonnegative integer");
  kernels::set_max_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gspkit: graph signal processing batch tools"};
  app.set_version_flag("--version", GSPKIT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Run run;
  Options o;
  std::string out_dir = ".";
  app.add_option("--seed", run.seed, "random seed")->capture_default_str();
  app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  app.add_flag("--quiet", run.quiet, "suppress progress notes");

  const auto file = CLI::ExistingFile;
  auto add_graph = [&](CLI::App* c, bool required = true) {
    auto* g = c->add_option("--graph", o.graph, "edge-list CSV with a .json sidecar")->check(file);
    if (required) g->required();
    c->add_option("--variant", o.variant, "shift operator")
        ->check(CLI::IsMember(kVariants))
        ->capture_default_str();
  };

  std::map<CLI::App*, void (*)(const Options&, Run&)> handlers;

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and the GFT of a signal");
  add_graph(spectrum);
  spectrum->add_option("--signal", o.signal, "signal CSV (N x 1)")->check(file);
  handlers[spectrum] = cmd_spectrum;

  auto* filter = app.add_subcommand("filter", "apply a graph filter");
  add_graph(filter);
  filter->add_option("--signal", o.signal, "signal CSV (N x M)")->required()->check(file);
  filter->add_option("--taps", o.taps, "polynomial taps h0,h1,...")->delimiter(',');
  filter->add_option("--response", o.response, "frequency response per eigen index")->delimiter(',');
  filter->add_option("--kernel", o.kernel, "heat:<tau> or rect:<cutoff>");
  filter->add_option("--chebyshev", o.chebyshev, "Chebyshev order for --kernel");
  filter->add_option("--interval", o.interval, "Chebyshev interval lo,hi")->delimiter(',');
  filter->add_option("--iir", o.iir, "denominator taps a0,a1,...")->delimiter(',');
  filter->add_option("--filter", o.filter, "filter JSON")->check(file);
  handlers[filter] = cmd_filter;

  auto* interp = app.add_subcommand("interpolate", "recover a signal from samples");
  add_graph(interp);
  interp->add_option("--mode", o.mode, "bandlimited or regularized")->required();
  interp->add_option("--k", o.k, "bandwidth");
  interp->add_option("--alpha", o.alpha, "regularization weight")->capture_default_str();
  interp->add_option("--taps", o.taps, "regularizer taps")->delimiter(',');
  interp->add_option("--kernel", o.kernel, "regularizer kernel (default heat:1)");
  interp->add_option("--samples", o.samples, "sampling set JSON")->check(file);
  interp->add_option("--select", o.select, "greedy sampling set size");
  interp->add_option("--signal", o.signal, "full signal CSV to sample")->check(file);
  interp->add_option("--values", o.values, "sampled values CSV (|M| x 1)")->check(file);
  handlers[interp] = cmd_interpolate;

  auto* ssl = app.add_subcommand("ssl", "semi-supervised labelling");
  add_graph(ssl);
  ssl->add_option("--labels", o.labels, "vertex,label CSV")->required()->check(file);
  ssl->add_option("--alpha", o.alpha, "smoothness weight")->capture_default_str();
  handlers[ssl] = cmd_ssl;

  auto* sources = app.add_subcommand("sources", "sparse source identification");
  add_graph(sources);
  sources->add_option("--signal", o.signal, "observed signal CSV")->required()->check(file);
  sources->add_option("--k", o.k, "number of sources")->required();
  sources->add_option("--taps", o.taps, "diffusion filter taps")->delimiter(',');
  sources->add_option("--kernel", o.kernel, "diffusion kernel (default heat:1)");
  handlers[sources] = cmd_sources;

  auto* psd = app.add_subcommand("psd", "periodogram PSD estimate");
  add_graph(psd);
  psd->add_option("--signals", o.signals, "signal matrix CSV")->required()->check(file);
  handlers[psd] = cmd_psd;

  auto* wiener = app.add_subcommand("wiener", "Wiener denoising");
  add_graph(wiener);
  wiener->add_option("--psd", o.psd, "PSD JSON")->required()->check(file);
  wiener->add_option("--noise", o.noise, "noise variance")->required();
  wiener->add_option("--signal", o.signal, "noisy signals CSV")->required()->check(file);
  handlers[wiener] = cmd_wiener;

  auto* synth = app.add_subcommand("synth", "synthesize stationary signals");
  add_graph(synth);
  synth->add_option("--psd", o.psd, "PSD JSON")->check(file);
  synth->add_option("--psd-kernel", o.psd_kernel, "PSD as a kernel of the eigenvalues");
  synth->add_option("--m", o.m, "number of signals")->capture_default_str();
  handlers[synth] = cmd_synth;

  auto* learn = app.add_subcommand("learn", "learn a graph from signals");
  learn->add_option("--method", o.method, "smooth, corr, precision or template")->required();
  learn->add_option("--signals", o.signals, "signal matrix CSV")->required()->check(file);
  learn->add_option("--beta", o.beta, "Frobenius weight (smooth)")->capture_default_str();
  learn->add_option("--trace", o.trace, "Laplacian trace, 0 for N (smooth)")->capture_default_str();
  learn->add_option("--tau", o.tau, "edge threshold (corr, precision)")->capture_default_str();
  learn->add_option("--ridge", o.ridge, "covariance ridge (precision)")->capture_default_str();
  learn->add_option("--rank-tol", o.rank_tol, "constraint rank tolerance (template)")->capture_default_str();
  learn->add_option("--feasibility-tol", o.feasibility_tol, "constraint residual (template)")->capture_default_str();
  learn->add_option("--max-iters", o.max_iters, "iteration cap");
  learn->add_option("--truth", o.truth, "reference graph for the F1 sweep")->check(file);
  handlers[learn] = cmd_learn;

  auto* var = app.add_subcommand("var", "fit or apply a VAR model");
  o.mode = "graph-var";
  var->add_option("action", o.action, "fit or predict")->required();
  add_graph(var, false);
  var->add_option("--series", o.series, "N x T series (history for predict)")->required()->check(file);
  var->add_option("--mode", o.mode, "graph-var or structural-var")->capture_default_str();
  var->add_option("--p", o.p, "order P")->capture_default_str();
  var->add_option("--l", o.l, "filter degree L (graph-var)")->capture_default_str();
  var->add_flag("--causal", o.causal, "fix taps with l > p at zero");
  var->add_option("--lambda", o.lambda, "l1 weight (structural-var)")->capture_default_str();
  var->add_option("--max-iters", o.max_iters, "iteration cap (structural-var)");
  var->add_option("--model", o.model, "model JSON (predict)")->check(file);
  handlers[var] = cmd_var;

  auto* product = app.add_subcommand("product", "graph-time product operator");
  add_graph(product);
  product->add_option("--kind", o.kind, "kronecker, cartesian or strong")->capture_default_str();
  product->add_option("--time-cycle", o.time_cycle, "directed cycle of length T");
  product->add_option("--time-graph", o.time_graph, "time graph edge list")->check(file);
  product->add_option("--time-variant", o.time_variant, "time shift operator")
      ->check(CLI::IsMember(kVariants))
      ->capture_default_str();
  handlers[product] = cmd_product;

  auto* joint = app.add_subcommand("jointgft", "joint time-vertex Fourier transform");
  add_graph(joint);
  joint->add_option("--series", o.series, "N x T series")->required()->check(file);
  joint->add_option("--time-cycle", o.time_cycle, "directed cycle of length T (default: T)");
  joint->add_option("--time-graph", o.time_graph, "time graph edge list")->check(file);
  joint->add_option("--time-variant", o.time_variant, "time shift operator")
      ->check(CLI::IsMember(kVariants))
      ->capture_default_str();
  handlers[joint] = cmd_jointgft;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << GSPKIT_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    apply_thread_cap();
    run.out_dir = out_dir;
    std::error_code ec;
    fs::create_directories(run.out_dir, ec);
    if (ec) throw DataError("cannot create '" + out_dir + "': " + ec.message());
    // Kernel specs are part of the schema, so they are checked before any
    // input is read.
    if (!o.kernel.empty()) parse_kernel(o.kernel);
    if (!o.psd_kernel.empty()) parse_kernel(o.psd_kernel);
    handlers.at(sub)(o, run);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 2);
  } catch (const NumericalError& e) {
    return fail("numerical", e.what(), 4);
  } catch (const DataError& e) {
    return fail("data", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json meta{{"command", sub->get_name()},
            {"inputs", collect_options(sub, true)},
            {"parameters", collect_options(sub, false)},
            {"seed", run.seed},
            {"version", GSPKIT_VERSION},
            {"outputs", run.outputs},
            {"results", run.results},
            {"wall_time_seconds", wall}};
  try {
    io::write_json(run.out_dir / "metadata.json", meta);
  } catch (const DataError& e) {
    return fail("data", e.what(), 3);
  }
  run.note(sub->get_name() + ": wrote " + std::to_string(run.outputs.size()) + " files to " +
           run.out_dir.string());
  return 0;
}
