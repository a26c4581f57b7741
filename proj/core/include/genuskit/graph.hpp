#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace genuskit {

using VertexId = std::int64_t;
using EdgeId = std::int64_t;
using VertexSet = std::set<VertexId>;
using EdgeSet = std::set<EdgeId>;

struct Edge {
  EdgeId id = -1;
  VertexId u = -1;
  VertexId v = -1;
  bool is_loop() const { return u == v; }
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multigraph with stable ids. Iteration is always in ascending id order.
// A self-loop shows up twice in the incidence list of its vertex.
class Graph {
 public:
  Graph() = default;

  VertexId add_vertex();
  VertexId add_vertex(VertexId id);  // explicit id; no-op if present
  EdgeId add_edge(VertexId u, VertexId v);
  EdgeId add_edge(EdgeId id, VertexId u, VertexId v);

  void remove_edge(EdgeId e);
  void remove_vertex(VertexId v);  // drops incident edges too

  bool has_vertex(VertexId v) const { return adj_.count(v) > 0; }
  bool has_edge(EdgeId e) const { return edges_.count(e) > 0; }
  const Edge& edge(EdgeId e) const;

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::vector<VertexId> vertices() const;
  std::vector<EdgeId> edges() const;
  const std::vector<EdgeId>& incident(VertexId v) const;
  std::vector<VertexId> neighbors(VertexId v) const;  // sorted, unique, no self
  std::size_t degree(VertexId v) const { return incident(v).size(); }
  VertexId other(EdgeId e, VertexId v) const;
  std::vector<EdgeId> edges_between(VertexId a, VertexId b) const;
  bool adjacent(VertexId a, VertexId b) const { return !edges_between(a, b).empty(); }
  bool is_simple() const;

  VertexId max_vertex_id() const { return adj_.empty() ? -1 : adj_.rbegin()->first; }
  EdgeId max_edge_id() const { return edges_.empty() ? -1 : edges_.rbegin()->first; }
  VertexId next_vertex_id() const { return next_v_; }
  EdgeId next_edge_id() const { return next_e_; }

  void set_label(VertexId v, std::string s) { labels_[v] = std::move(s); }
  std::optional<std::string> label(VertexId v) const;
  const std::map<VertexId, std::string>& labels() const { return labels_; }

  const std::map<EdgeId, Edge>& edge_map() const { return edges_; }

  bool operator==(const Graph& o) const;

 private:
  std::map<VertexId, std::vector<EdgeId>> adj_;
  std::map<EdgeId, Edge> edges_;
  std::map<VertexId, std::string> labels_;
  VertexId next_v_ = 0;
  EdgeId next_e_ = 0;
};

// Keeps vertex and edge ids.
Graph induced_subgraph(const Graph& g, const VertexSet& vs);
Graph edge_subgraph(const Graph& g, const EdgeSet& es);
// g minus a vertex set
Graph remove_vertices(const Graph& g, const VertexSet& vs);

std::vector<VertexSet> connected_components(const Graph& g);
bool is_connected(const Graph& g);
bool is_bipartite(const Graph& g);
// vertices reachable from v inside vs (vs must contain v)
VertexSet reach_within(const Graph& g, VertexId v, const VertexSet& vs);

struct BlockCutTree {
  std::vector<std::vector<EdgeId>> blocks;         // sorted edge ids
  std::vector<std::vector<VertexId>> block_vertices;
  VertexSet cut_vertices;
  // block index -> cut vertices it contains (bipartite block/cut tree)
  std::vector<std::pair<std::size_t, VertexId>> tree;
  bool forest = false;   // input was disconnected
  std::vector<VertexId> isolated;
  std::vector<std::size_t> blocks_at(VertexId v) const;
};

BlockCutTree biconnected_decompose(const Graph& g);
bool is_biconnected(const Graph& g);  // connected, >=2 vertices, no cut vertex

struct CutResult {
  Graph graph;
  std::map<VertexId, VertexId> origin;  // new id -> original id
};

CutResult cut_along(const Graph& g, const VertexSet& s);

struct ContractResult {
  Graph graph;
  VertexId merged = -1;
  int genus_delta_bound = 0;
};

ContractResult contract_set(const Graph& g, const VertexSet& u, bool simplify = false);

struct MinorMapping {
  Graph minor;
  std::map<VertexId, VertexSet> branch_sets;
};

struct MinorCheck {
  bool ok = false;
  std::string reason;  // nonempty|membership|disjointness|connectivity|edge
  std::string detail;
};

MinorCheck verify_minor_mapping(const Graph& g, const MinorMapping& m);

struct Petals {
  std::vector<Graph> petals;
  bool not_cut_vertex = false;
};

Petals petals_and_propellers(const Graph& h, VertexId v);

// Text edge list: "u v" per line, '#' comments. Edge ids follow line order.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_graphml(std::istream& in);
void write_graphml(std::ostream& out, const Graph& g);
Graph read_graph_file(const std::string& path);  // dispatch on extension

// small constructors used all over tests and benches
Graph complete_graph(int n);
Graph complete_bipartite(int m, int n);  // left 0..m-1, right m..m+n-1
Graph cycle_graph(int n);
Graph path_graph(int n);
Graph grid_graph(int rows, int cols);  // vertex r*cols+c

}  // namespace genuskit
