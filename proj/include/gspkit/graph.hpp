#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "gspkit/types.hpp"

namespace gspkit {

struct Edge {
  Index src = 0;
  Index dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Validated weighted graph on vertices 0..n-1.
//
// Undirected graphs store each edge once with src < dst; expanded_edges()
// returns both orientations. Directed edges are kept in (src, dst) order.
class Graph {
 public:
  Index n_vertices() const { return n_; }
  bool directed() const { return directed_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Edge> expanded_edges() const;
  bool has_negative_weight() const;

 private:
  friend Graph build_graph(Index n, std::vector<Edge> edges, bool directed);

  Index n_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
};

enum class GsoVariant {
  adjacency,
  combinatorial_laplacian,
  normalized_laplacian,
  random_walk_laplacian,
  custom,
};

std::string_view to_string(GsoVariant v);
GsoVariant parse_gso_variant(std::string_view name);
bool is_laplacian(GsoVariant v);

// Graph shift operator. For adjacency operators, entry (i, j) carries the
// weight of the edge j -> i, so (S x)_i aggregates over in-neighbours of i.
class Gso {
 public:
  Gso() = default;
  // Wrap an arbitrary square matrix as a custom operator.
  static Gso custom(Matrix m);

  const Matrix& matrix() const { return matrix_; }
  GsoVariant variant() const { return variant_; }
  const Graph* source() const { return source_.get(); }
  Index size() const { return matrix_.rows(); }
  bool is_symmetric(double tol = 0.0) const;

 private:
  friend Gso make_gso(const Graph& g, GsoVariant variant);

  Matrix matrix_;
  GsoVariant variant_ = GsoVariant::custom;
  std::shared_ptr<const Graph> source_;
};

// Throws DataError on out-of-range ids, self loops, duplicates, non-finite
// weights or conflicting weights for the two orientations of an undirected edge.
Graph build_graph(Index n, std::vector<Edge> edges, bool directed);

// Throws DataError when a Laplacian is requested for a directed or negatively
// weighted graph.
Gso make_gso(const Graph& g, GsoVariant variant);

// Edges i -> (i + 1) mod n with unit weight; the adjacency acts as a unit delay.
Graph directed_cycle(Index n);

// Weakly connected components.
Index connected_components(const Graph& g);

// True when the matrix is the adjacency of a directed n-cycle, i.e. S(i+1, i) = 1.
bool is_directed_cycle_shift(const Matrix& s);

}  // namespace gspkit
