#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gspkit/filters.hpp"
#include "gspkit/graph.hpp"
#include "gspkit/inverse.hpp"
#include "gspkit/spectral.hpp"
#include "gspkit/stochastic.hpp"
#include "gspkit/timevertex.hpp"
#include "gspkit/topology.hpp"
#include "gspkit/types.hpp"

// File formats. CSV numbers are written with 17 significant digits, '.' as
// the decimal separator and '\n' line endings. All readers throw DataError
// on malformed input.
namespace gspkit::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double x);

// Edge list "src,dst,weight" plus a sidecar {"n": N, "directed": bool} at the
// same path with a .json extension.
fs::path sidecar_path(const fs::path& csv);
Graph read_graph(const fs::path& csv);
void write_graph(const fs::path& csv, const Graph& g);

// Plain numeric CSV without header; rows are vertices, columns are signals
// (or time steps).
Matrix read_matrix(const fs::path& path);
void write_matrix(const fs::path& path, const Matrix& m);

// Two-column plot table with a header line.
void write_table(const fs::path& path, const std::string& x_name, const std::string& y_name,
                 const std::vector<double>& xs, const std::vector<double>& ys);

// {"eigenvalues": [[re, im], ...], "ordering": [...], "coefficients": [[re, im], ...]}
json spectrum_json(const SpectralDecomposition& d, const CVector& coefficients);

// {"form": "taps"|"response"|"rational", "coefficients": [...], "interval": [lo, hi]?}
json filter_json(const GraphFilter& f);
// Response filters are bound to the decomposition they will be applied with.
GraphFilter filter_from_json(const json& j, const SpectralDecomposition* d = nullptr);

// {"n": N, "indices": [...]}
json sampling_set_json(const SamplingSet& m);
SamplingSet sampling_set_from_json(const json& j);

// "vertex,label" with header.
struct Labels {
  std::vector<Index> vertices;
  std::vector<double> values;
};
Labels read_labels(const fs::path& path);

// {"eigenvalue_index_psd": [...], "samples": M}
json psd_json(const PsdEstimate& p);
PsdEstimate psd_from_json(const json& j);

// {"mode": ..., "order": P, "coefficients": ...}; graph-var coefficients are
// the P x (L+1) tap rows, structural-var coefficients the list A_0..A_P.
json var_json(const VarModel& m);
VarModel var_from_json(const json& j);

json read_json(const fs::path& path);
void write_json(const fs::path& path, const json& j);

}  // namespace gspkit::io
