#include "gspkit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "gspkit/error.hpp"

namespace gspkit {

std::vector<Edge> Graph::expanded_edges() const {
  if (directed_) return edges_;
  std::vector<Edge> out;
  out.reserve(2 * edges_.size());
  for (const auto& e : edges_) {
    out.push_back(e);
    out.push_back({e.dst, e.src, e.weight});
  }
  return out;
}

bool Graph::has_negative_weight() const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.weight < 0.0; });
}

std::string_view to_string(GsoVariant v) {
  switch (v) {
    case GsoVariant::adjacency:
      return "adjacency";
    case GsoVariant::combinatorial_laplacian:
      return "combinatorial-laplacian";
    case GsoVariant::normalized_laplacian:
      return "normalized-laplacian";
    case GsoVariant::random_walk_laplacian:
      return "random-walk-laplacian";
    case GsoVariant::custom:
      return "custom";
  }
  return "custom";
}

GsoVariant parse_gso_variant(std::string_view name) {
  if (name == "adjacency") return GsoVariant::adjacency;
  if (name == "laplacian" || name == "combinatorial-laplacian")
    return GsoVariant::combinatorial_laplacian;
  if (name == "normalized-laplacian") return GsoVariant::normalized_laplacian;
  if (name == "random-walk-laplacian") return GsoVariant::random_walk_laplacian;
  if (name == "custom") return GsoVariant::custom;
  throw DataError("unknown GSO variant '" + std::string(name) + "'");
}

bool is_laplacian(GsoVariant v) {
  return v == GsoVariant::combinatorial_laplacian ||
         v == GsoVariant::normalized_laplacian ||
         v == GsoVariant::random_walk_laplacian;
}

Gso Gso::custom(Matrix m) {
  if (m.rows() != m.cols()) throw DataError("custom GSO must be square");
  if (!m.allFinite()) throw DataError("custom GSO has non-finite entries");
  Gso s;
  s.matrix_ = std::move(m);
  s.variant_ = GsoVariant::custom;
  return s;
}

bool Gso::is_symmetric(double tol) const {
  const Index n = size();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(matrix_(i, j) - matrix_(j, i)) > tol) return false;
  return true;
}

Graph build_graph(Index n, std::vector<Edge> edges, bool directed) {
  if (n < 1) throw DataError("graph needs at least one vertex");
  std::map<std::pair<Index, Index>, double> seen;
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
      throw DataError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                      ") has a vertex id outside [0," + std::to_string(n) + ")");
    if (e.src == e.dst)
      throw DataError("self-loop at vertex " + std::to_string(e.src));
    if (!std::isfinite(e.weight))
      throw DataError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                      ") has a non-finite weight");
    if (seen.count({e.src, e.dst}))
      throw DataError("duplicate edge (" + std::to_string(e.src) + "," +
                      std::to_string(e.dst) + ")");
    seen[{e.src, e.dst}] = e.weight;
    if (directed) {
      kept.push_back(e);
      continue;
    }
    if (auto it = seen.find({e.dst, e.src}); it != seen.end()) {
      if (it->second != e.weight)
        throw DataError("conflicting weights for undirected edge (" +
                        std::to_string(e.src) + "," + std::to_string(e.dst) + ")");
      continue;  // reverse orientation already stored
    }
    kept.push_back({std::min(e.src, e.dst), std::max(e.src, e.dst), e.weight});
  }
  std::sort(kept.begin(), kept.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  Graph g;
  g.n_ = n;
  g.directed_ = directed;
  g.edges_ = std::move(kept);
  return g;
}

Gso make_gso(const Graph& g, GsoVariant variant) {
  const Index n = g.n_vertices();
  if (variant == GsoVariant::custom)
    throw DataError("custom GSOs are built with Gso::custom");
  if (is_laplacian(variant)) {
    if (g.directed()) throw DataError("Laplacian requested on a directed graph");
    if (g.has_negative_weight())
      throw DataError("Laplacian requested on a graph with negative weights");
  }

  Gso s;
  s.variant_ = variant;
  s.source_ = std::make_shared<const Graph>(g);
  s.matrix_ = Matrix::Zero(n, n);
  Matrix& m = s.matrix_;

  if (variant == GsoVariant::adjacency) {
    for (const auto& e : g.expanded_edges()) m(e.dst, e.src) = e.weight;
    return s;
  }

  // Degrees accumulated from the same weights that fill the off-diagonals.
  Vector deg = Vector::Zero(n);
  for (const auto& e : g.edges()) {
    deg(e.src) += e.weight;
    deg(e.dst) += e.weight;
  }
  switch (variant) {
    case GsoVariant::combinatorial_laplacian:
      for (const auto& e : g.edges()) {
        m(e.src, e.dst) = -e.weight;
        m(e.dst, e.src) = -e.weight;
      }
      for (Index i = 0; i < n; ++i) m(i, i) = deg(i);
      break;
    case GsoVariant::normalized_laplacian: {
      Vector inv_sqrt = Vector::Zero(n);
      for (Index i = 0; i < n; ++i)
        if (deg(i) > 0.0) inv_sqrt(i) = 1.0 / std::sqrt(deg(i));
      for (const auto& e : g.edges()) {
        const double v = -e.weight * inv_sqrt(e.src) * inv_sqrt(e.dst);
        m(e.src, e.dst) = v;
        m(e.dst, e.src) = v;
      }
      for (Index i = 0; i < n; ++i) m(i, i) = deg(i) > 0.0 ? 1.0 : 0.0;
      break;
    }
    case GsoVariant::random_walk_laplacian:
      for (const auto& e : g.edges()) {
        m(e.src, e.dst) = -e.weight / deg(e.src);
        m(e.dst, e.src) = -e.weight / deg(e.dst);
      }
      for (Index i = 0; i < n; ++i) m(i, i) = deg(i) > 0.0 ? 1.0 : 0.0;
      break;
    default:
      break;
  }
  return s;
}

Graph directed_cycle(Index n) {
  if (n < 2) throw DataError("directed cycle needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  return build_graph(n, std::move(edges), true);
}

Index connected_components(const Graph& g) {
  std::vector<Index> parent(static_cast<std::size_t>(g.n_vertices()));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  Index count = g.n_vertices();
  for (const auto& e : g.edges()) {
    const Index a = find(e.src), b = find(e.dst);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
      --count;
    }
  }
  return count;
}

bool is_directed_cycle_shift(const Matrix& s) {
  const Index n = s.rows();
  if (n < 2 || s.cols() != n) return false;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (s(i, j) != (i == (j + 1) % n ? 1.0 : 0.0)) return false;
  return true;
}

}  // namespace gspkit
