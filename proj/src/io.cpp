#include "gspkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gspkit/error.hpp"

namespace gspkit::io {

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": not a number '" + s + "'");
  }
}

Index parse_index(const std::string& s, const fs::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": not an integer '" + s + "'");
  }
}

json complex_list(const CVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_rows(const json& rows) {
  if (!rows.is_array()) throw DataError("expected a list of matrix rows");
  const Index r = static_cast<Index>(rows.size());
  const Index c = r > 0 ? static_cast<Index>(rows[0].size()) : 0;
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    if (!rows[i].is_array() || static_cast<Index>(rows[i].size()) != c)
      throw DataError("ragged matrix rows");
    for (Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".json");
  return p;
}

Graph read_graph(const fs::path& csv) {
  const json meta = read_json(sidecar_path(csv));
  Index n = 0;
  bool directed = false;
  try {
    n = meta.at("n").get<Index>();
    directed = meta.at("directed").get<bool>();
  } catch (const json::exception& e) {
    throw DataError("graph descriptor '" + sidecar_path(csv).string() + "': " + e.what());
  }
  auto in = open_in(csv);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw DataError("'" + csv.string() + "' is empty");
  ++lineno;
  const auto header = split(line);
  if (header != std::vector<std::string>{"src", "dst", "weight"})
    throw DataError("'" + csv.string() + "': expected header src,dst,weight");
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 3)
      throw DataError(csv.string() + ":" + std::to_string(lineno) + ": expected 3 fields");
    edges.push_back({parse_index(cells[0], csv, lineno), parse_index(cells[1], csv, lineno),
                     parse_double(cells[2], csv, lineno)});
  }
  return build_graph(n, std::move(edges), directed);
}

void write_graph(const fs::path& csv, const Graph& g) {
  auto out = open_out(csv);
  out << "src,dst,weight\n";
  for (const auto& e : g.edges()) out << e.src << ',' << e.dst << ',' << format_number(e.weight) << '\n';
  write_json(sidecar_path(csv), json{{"n", g.n_vertices()}, {"directed", g.directed()}});
}

Matrix read_matrix(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(parse_double(cell, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("'" + path.string() + "' holds no data");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix(const fs::path& path, const Matrix& m) {
  auto out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

void write_table(const fs::path& path, const std::string& x_name, const std::string& y_name,
                 const std::vector<double>& xs, const std::vector<double>& ys) {
  auto out = open_out(path);
  out << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
    out << format_number(xs[i]) << ',' << format_number(ys[i]) << '\n';
}

json spectrum_json(const SpectralDecomposition& d, const CVector& coefficients) {
  return json{{"eigenvalues", complex_list(d.cvalues)},
              {"ordering", d.ordering},
              {"coefficients", complex_list(coefficients)}};
}

json filter_json(const GraphFilter& f) {
  static constexpr const char* names[] = {"taps", "response", "rational"};
  json j{{"form", names[static_cast<int>(f.form)]}, {"coefficients", f.coefficients}};
  if (f.interval) j["interval"] = {f.interval->lo, f.interval->hi};
  return j;
}

GraphFilter filter_from_json(const json& j, const SpectralDecomposition* d) {
  try {
    const std::string form = j.at("form").get<std::string>();
    auto coeffs = j.at("coefficients").get<std::vector<double>>();
    if (form == "taps") {
      if (j.contains("interval")) {
        const auto iv = j.at("interval").get<std::vector<double>>();
        if (iv.size() != 2) throw DataError("filter interval must be [lo, hi]");
        return GraphFilter::from_chebyshev(std::move(coeffs), {iv[0], iv[1]});
      }
      return GraphFilter::from_taps(std::move(coeffs));
    }
    if (form == "response") {
      if (d == nullptr) throw DataError("response-form filter needs a decomposition");
      return GraphFilter::from_response(*d, std::move(coeffs));
    }
    if (form == "rational") return GraphFilter::from_denominator(std::move(coeffs));
    throw DataError("unknown filter form '" + form + "'");
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed filter JSON: ") + e.what());
  }
}

json sampling_set_json(const SamplingSet& m) {
  return json{{"n", m.ambient_size()}, {"indices", m.indices()}};
}

SamplingSet sampling_set_from_json(const json& j) {
  try {
    return SamplingSet(j.at("n").get<Index>(), j.at("indices").get<std::vector<Index>>());
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed sampling set JSON: ") + e.what());
  }
}

Labels read_labels(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || split(line) != std::vector<std::string>{"vertex", "label"})
    throw DataError("'" + path.string() + "': expected header vertex,label");
  Labels out;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 2)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected 2 fields");
    out.vertices.push_back(parse_index(cells[0], path, lineno));
    out.values.push_back(parse_double(cells[1], path, lineno));
  }
  return out;
}

json psd_json(const PsdEstimate& p) {
  return json{{"eigenvalue_index_psd", std::vector<double>(p.values.data(), p.values.data() + p.values.size())},
              {"samples", p.sample_count}};
}

PsdEstimate psd_from_json(const json& j) {
  try {
    const auto v = j.at("eigenvalue_index_psd").get<std::vector<double>>();
    PsdEstimate p;
    p.values = Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
    p.sample_count = j.value("samples", Index{0});
    return p;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed PSD JSON: ") + e.what());
  }
}

json var_json(const VarModel& m) {
  json j{{"mode", to_string(m.mode)}, {"order", m.order}};
  if (m.mode == VarMode::graph_var) {
    j["coefficients"] = matrix_rows(m.taps);
  } else {
    json lags = json::array();
    for (const auto& a : m.lags) lags.push_back(matrix_rows(a));
    j["coefficients"] = std::move(lags);
  }
  return j;
}

VarModel var_from_json(const json& j) {
  try {
    VarModel m;
    m.mode = parse_var_mode(j.at("mode").get<std::string>());
    m.order = j.at("order").get<Index>();
    if (m.mode == VarMode::graph_var) {
      m.taps = matrix_from_rows(j.at("coefficients"));
      if (m.taps.rows() != m.order) throw DataError("graph-VAR needs P coefficient rows");
    } else {
      for (const auto& a : j.at("coefficients")) m.lags.push_back(matrix_from_rows(a));
      if (static_cast<Index>(m.lags.size()) != m.order + 1)
        throw DataError("structural-VAR needs P + 1 matrices");
      for (Index i = 0; i < m.lags[0].rows(); ++i)
        if (m.lags[0](i, i) != 0.0) throw DataError("structural-VAR A_0 must have a zero diagonal");
    }
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed VAR model JSON: ") + e.what());
  }
}

json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("'" + path.string() + "': " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace gspkit::io
