#pragma once

#include <optional>
#include <string>

#include "genuskit/graph.hpp"

namespace genuskit {

// rows x cols grid; vertex(i, j) = i * cols + j, 0-based, as grid_graph
struct GridSpec {
  int rows = 0, cols = 0;
  VertexId vertex(int i, int j) const { return static_cast<VertexId>(i) * cols + j; }
  int row(VertexId v) const { return static_cast<int>(v / cols); }
  int col(VertexId v) const { return static_cast<int>(v % cols); }
  bool on_boundary(VertexId v) const;
  VertexSet boundary() const;
  VertexSet interior() const;
  Graph graph() const { return grid_graph(rows, cols); }
};

// K_{2,l} in the grid: left branch sets are the two combs (minor vertices 0
// and 1), right branch sets are single vertices of `a` (2..l+1).
struct CombWitness {
  MinorMapping mapping;
  int t_star = 0;
  VertexSet comb, comb_prime;  // T_t*, T'_t*
  int l() const { return static_cast<int>(mapping.branch_sets.size()) - 2; }
};

// Throws GraphError if `a` meets the boundary or leaves the grid.
CombWitness k2r_in_grid(const GridSpec& grid, const VertexSet& a);
// The combs for a given t, as vertex sets; used by the structural checks.
std::pair<VertexSet, VertexSet> grid_combs(const GridSpec& grid, int t);

// grid plus `apex` joined to every vertex of a
Graph apex_grid(const GridSpec& grid, const VertexSet& a, VertexId apex);
// K_{3,l}: the comb witness plus {apex} as minor vertex 2; right side 3..l+2.
MinorMapping k3r_in_apex_grid(const GridSpec& grid, const VertexSet& a, VertexId apex);

// Graph[sub] is planar with every attachment vertex (one with a neighbour
// outside sub) on a common face.
bool is_flat(const Graph& g, const VertexSet& sub);

struct LowerBoundCertificate {
  MinorMapping witness;
  int r = 0;
  int implied_bound = 0;  // kmn_genus(3, r)
  int budget = 0;
  bool exceeds = false;   // implied_bound > budget, i.e. eg(G) > budget
  std::string verdict;
};

// Throws GraphError unless the witness verifies and is onto some K_{3,r}.
LowerBoundCertificate certify_lower_bound(const Graph& g, const MinorMapping& witness, int budget);

// Best K_{3,r} found with three single-vertex left branch sets; the right
// branch sets are components of G minus the three (or single common
// neighbours). Empty when none with r >= 1.
std::optional<MinorMapping> find_k3r_minor(const Graph& g);

struct FlatGridResult {
  enum class Kind { Flat, Certificate, ScaleInsufficient } kind = Kind::ScaleInsufficient;
  VertexSet planarizing;  // heuristic X
  int grid_size = 0;      // k of the k x k grid found in a planar component
  int tile_size = 0;
  int tiles = 0;
  double c = 4;
  VertexSet flat;          // vertices of the flat subgraph G'
  MinorMapping grid_minor; // onto the tile_size x tile_size grid (Flat)
  std::optional<LowerBoundCertificate> certificate;
  std::string note;
};

// max_search_nodes bounds the grid subgraph search per size.
FlatGridResult flat_grid_minor(const Graph& g, int budget, double c = 4, long max_search_nodes = 2'000'000);

// Repeatedly deletes the max-degree vertex of a Kuratowski subgraph.
VertexSet planarizing_set(const Graph& g);

std::string to_json(const LowerBoundCertificate& c);
std::string to_json(const MinorMapping& m);
MinorMapping minor_mapping_from_json(const std::string& text);

}  // namespace genuskit
