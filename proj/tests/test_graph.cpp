#include <gtest/gtest.h>

#include <sstream>

#include <genuskit/graph.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace genuskit;
using namespace testsupport;

namespace {

Graph two_triangles() {
  // triangles 0-1-2 and 2-3-4 share vertex 2
  Graph g;
  for (int i = 0; i < 5; ++i) g.add_vertex(i);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 2);
  return g;
}

Graph star(int k) {
  Graph g;
  g.add_vertex(0);
  for (int i = 1; i <= k; ++i) {
    g.add_vertex(i);
    g.add_edge(0, i);
  }
  return g;
}

}  // namespace

TEST(Graph, StableIdsAndOrder) {
  Graph g;
  g.add_vertex(5);
  g.add_vertex(2);
  VertexId a = g.add_vertex();
  EXPECT_EQ(a, 6);
  EdgeId e0 = g.add_edge(5, 2);
  EdgeId e1 = g.add_edge(2, 6);
  EdgeId e2 = g.add_edge(5, 5);
  EXPECT_EQ(g.vertices(), (std::vector<VertexId>{2, 5, 6}));
  EXPECT_EQ(g.degree(5), 3u);  // loop counts twice
  g.remove_vertex(2);
  EXPECT_FALSE(g.has_edge(e0));
  EXPECT_FALSE(g.has_edge(e1));
  EXPECT_TRUE(g.has_edge(e2));
  EXPECT_EQ(g.edge(e2).u, 5);
  EXPECT_THROW(g.add_edge(0, 9), GraphError);
}

TEST(Graph, ParallelEdgesAreDistinct) {
  Graph g;
  g.add_vertex(0);
  g.add_vertex(1);
  g.add_edge(0, 1);
  g.add_edge(0, 1);
  EXPECT_EQ(g.edges_between(1, 0).size(), 2u);
  EXPECT_FALSE(g.is_simple());
}

TEST(BiconnectedDecompose, Triangle) {
  auto t = biconnected_decompose(cycle_graph(3));
  EXPECT_EQ(t.blocks.size(), 1u);
  EXPECT_TRUE(t.cut_vertices.empty());
}

TEST(BiconnectedDecompose, TwoTrianglesShareVertex) {
  auto t = biconnected_decompose(two_triangles());
  EXPECT_EQ(t.blocks.size(), 2u);
  EXPECT_EQ(t.cut_vertices, (VertexSet{2}));
  EXPECT_EQ(t.tree.size(), 2u);
}

TEST(BiconnectedDecompose, PathOnFourMatchesBruteForce) {
  Graph p = path_graph(4);
  auto t = biconnected_decompose(p);
  EXPECT_EQ(t.blocks.size(), 3u);
  EXPECT_EQ(t.cut_vertices, brute_cut_vertices(p));
  EXPECT_EQ(t.cut_vertices.size(), 2u);
}

TEST(BiconnectedDecompose, DisconnectedIsFlaggedForest) {
  Graph g = two_triangles();
  g.add_vertex(10);
  g.add_vertex(11);
  g.add_edge(10, 11);
  auto t = biconnected_decompose(g);
  EXPECT_TRUE(t.forest);
  EXPECT_EQ(t.blocks.size(), 3u);
}

TEST(BiconnectedDecompose, PropertyBlocksPartitionEdges) {
  Rng rng(11);
  for (int it = 0; it < 300; ++it) {
    int n = 2 + static_cast<int>(rng() % 10);
    Graph g = random_connected_graph(rng, n, n - 1 + static_cast<int>(rng() % 6));
    auto t = biconnected_decompose(g);
    std::size_t total = 0;
    std::set<EdgeId> seen;
    for (auto& b : t.blocks) {
      total += b.size();
      seen.insert(b.begin(), b.end());
    }
    ASSERT_EQ(total, g.num_edges());
    ASSERT_EQ(seen.size(), g.num_edges());
    ASSERT_EQ(t.cut_vertices, brute_cut_vertices(g));
    // adjacent tree nodes share exactly one vertex: a cut vertex lies in its block
    for (auto& [b, v] : t.tree)
      ASSERT_TRUE(std::binary_search(t.block_vertices[b].begin(), t.block_vertices[b].end(), v));
    // each block is 2-connected or a single edge
    for (auto& b : t.blocks) {
      Graph h = edge_subgraph(g, {b.begin(), b.end()});
      if (h.num_edges() > 1) ASSERT_TRUE(is_biconnected(h));
    }
  }
}

TEST(CutAlong, StarCenterGivesDisjointEdges) {
  auto r = cut_along(star(3), {0});
  EXPECT_EQ(r.graph.num_vertices(), 6u);
  EXPECT_EQ(connected_components(r.graph).size(), 3u);
  for (auto& c : connected_components(r.graph)) EXPECT_EQ(c.size(), 2u);
  int copies = 0;
  for (auto& [nv, ov] : r.origin)
    if (ov == 0) ++copies;
  EXPECT_EQ(copies, 3);
}

TEST(CutAlong, BiconnectedUnchanged) {
  Graph k4 = complete_graph(4);
  auto r = cut_along(k4, {2});
  EXPECT_TRUE(r.graph == k4);
}

TEST(CutAlong, TwoTrianglesSplit) {
  auto r = cut_along(two_triangles(), {2});
  auto comps = connected_components(r.graph);
  ASSERT_EQ(comps.size(), 2u);
  for (auto& c : comps) {
    Graph h = induced_subgraph(r.graph, c);
    EXPECT_EQ(h.num_vertices(), 3u);
    EXPECT_EQ(h.num_edges(), 3u);
  }
}

TEST(CutAlong, EmptySetIsIdentity) {
  Graph g = two_triangles();
  EXPECT_TRUE(cut_along(g, {}).graph == g);
}

TEST(CutAlong, PropertyVertexCountMatchesComponentCounting) {
  Rng rng(5);
  for (int it = 0; it < 200; ++it) {
    int n = 3 + static_cast<int>(rng() % 9);
    Graph g = random_connected_graph(rng, n, n - 1 + static_cast<int>(rng() % 4));
    VertexSet s;
    for (VertexId v : g.vertices())
      if (rng() % 3 == 0) s.insert(v);
    // independent count: apply step by step, counting components created
    Graph cur = g;
    std::size_t expect = g.num_vertices();
    for (VertexId v : s) {
      // components of cur - v inside v's component that touch v
      int before = static_cast<int>(connected_components(cur).size());
      int after = components_without(cur, v);
      int created = after - before + 1;  // components around v
      if (cur.degree(v) == 0) created = 0;
      if (created > 1) expect += static_cast<std::size_t>(created - 1);
      cur = cut_along(cur, {v}).graph;
    }
    auto r = cut_along(g, s);
    ASSERT_EQ(r.graph.num_vertices(), expect);
    ASSERT_EQ(r.graph.num_edges(), g.num_edges());
    for (auto& [nv, ov] : r.origin) ASSERT_TRUE(g.has_vertex(ov));
  }
}

TEST(ContractSet, SingleVertexIsIdentity) {
  Graph g = complete_graph(4);
  auto r = contract_set(g, {1});
  EXPECT_TRUE(r.graph == g);
  EXPECT_EQ(r.genus_delta_bound, 0);
}

TEST(ContractSet, OneSideOfK33) {
  auto r = contract_set(complete_bipartite(3, 3), {0, 1, 2});
  EXPECT_EQ(r.graph.num_vertices(), 4u);
  EXPECT_EQ(r.graph.num_edges(), 9u);
  EXPECT_EQ(r.graph.neighbors(0), (std::vector<VertexId>{3, 4, 5}));
  EXPECT_EQ(r.genus_delta_bound, 2);
}

TEST(ContractSet, EdgeOfK4) {
  auto r = contract_set(complete_graph(4), {0, 1});
  // the contracted edge disappears, the two triangles through it become parallels
  EXPECT_EQ(r.graph.num_vertices(), 3u);
  EXPECT_EQ(r.graph.num_edges(), 5u);
  EXPECT_EQ(r.genus_delta_bound, 1);
  auto s = contract_set(complete_graph(4), {0, 1}, true);
  EXPECT_EQ(s.graph.num_edges(), 3u);
  EXPECT_THROW(contract_set(complete_graph(4), {7}), GraphError);
}

TEST(MinorMapping, IdentityAccepted) {
  Graph g = complete_graph(4);
  MinorMapping m{g, {}};
  for (VertexId v : g.vertices()) m.branch_sets[v] = {v};
  EXPECT_TRUE(verify_minor_mapping(g, m).ok);
}

TEST(MinorMapping, K4InThreeByThreeGrid) {
  // grid ids r*3+c; three L-shaped sets around the center vertex
  Graph grid = grid_graph(3, 3);
  MinorMapping m{complete_graph(4), {}};
  m.branch_sets[0] = {0, 1};
  m.branch_sets[1] = {2, 5, 8};
  m.branch_sets[2] = {3, 6, 7};
  m.branch_sets[3] = {4};
  auto c = verify_minor_mapping(grid, m);
  EXPECT_TRUE(c.ok) << c.reason << " " << c.detail;
}

TEST(MinorMapping, OverlapRejected) {
  Graph g = complete_graph(4);
  MinorMapping m{complete_graph(2), {}};
  m.branch_sets[0] = {0, 1};
  m.branch_sets[1] = {1, 2};
  auto c = verify_minor_mapping(g, m);
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.reason, "disjointness");
}

TEST(MinorMapping, OtherFailures) {
  Graph p = path_graph(4);
  MinorMapping m{complete_graph(2), {}};
  m.branch_sets[0] = {0, 2};
  m.branch_sets[1] = {3};
  EXPECT_EQ(verify_minor_mapping(p, m).reason, "connectivity");
  m.branch_sets[0] = {0};
  EXPECT_EQ(verify_minor_mapping(p, m).reason, "edge");
  m.branch_sets[0] = {};
  EXPECT_EQ(verify_minor_mapping(p, m).reason, "nonempty");
  m.branch_sets[0] = {42};
  EXPECT_EQ(verify_minor_mapping(p, m).reason, "membership");
}

TEST(MinorMapping, SoundnessByExplicitContraction) {
  Rng rng(17);
  int accepted = 0;
  for (int it = 0; it < 300; ++it) {
    int n = 4 + static_cast<int>(rng() % 10);
    Graph g = random_connected_graph(rng, n, n + static_cast<int>(rng() % 8));
    // random partition into connected-ish chunks, then a random target minor
    int k = 2 + static_cast<int>(rng() % 3);
    MinorMapping m;
    for (int i = 0; i < k; ++i) m.minor.add_vertex(i);
    for (VertexId v : g.vertices())
      if (rng() % 4 != 0) m.branch_sets[static_cast<VertexId>(rng() % k)].insert(v);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (rng() % 2) m.minor.add_edge(i, j);
    auto c = verify_minor_mapping(g, m);
    if (!c.ok) continue;
    ++accepted;
    // contract every branch set, delete the rest, check edges of the minor
    Graph h = g;
    VertexSet used;
    for (auto& [a, bs] : m.branch_sets) used.insert(bs.begin(), bs.end());
    VertexSet drop;
    for (VertexId v : h.vertices())
      if (!used.count(v)) drop.insert(v);
    h = remove_vertices(h, drop);
    std::map<VertexId, VertexId> rep;
    for (auto& [a, bs] : m.branch_sets) {
      auto r = contract_set(h, bs);
      h = r.graph;
      rep[a] = r.merged;
    }
    for (auto& [id, e] : m.minor.edge_map()) ASSERT_TRUE(h.adjacent(rep[e.u], rep[e.v]));
  }
  EXPECT_GT(accepted, 10);
}

TEST(Petals, TwoTriangles) {
  auto p = petals_and_propellers(two_triangles(), 2);
  EXPECT_FALSE(p.not_cut_vertex);
  ASSERT_EQ(p.petals.size(), 2u);
  for (auto& h : p.petals) EXPECT_EQ(h.num_edges(), 3u);
}

TEST(Petals, StarCenter) {
  auto p = petals_and_propellers(star(4), 0);
  ASSERT_EQ(p.petals.size(), 4u);
  for (auto& h : p.petals) EXPECT_EQ(h.num_edges(), 1u);
}

TEST(Petals, ThreePetalsAndPropeller) {
  Graph g = two_triangles();
  g.add_vertex(5);
  g.add_vertex(6);
  g.add_edge(2, 5);
  g.add_edge(5, 6);
  g.add_edge(6, 2);
  auto p = petals_and_propellers(g, 2);
  ASSERT_EQ(p.petals.size(), 3u);
  EXPECT_EQ(static_cast<int>(p.petals.size()), components_without(g, 2));
  auto q = petals_and_propellers(complete_graph(4), 0);
  EXPECT_TRUE(q.not_cut_vertex);
  EXPECT_EQ(q.petals.size(), 1u);
}

TEST(GraphIO, EdgeListRoundTripAndComments) {
  std::istringstream in("# header\n0 1\n1 2 # trailing\n\n2 0\n7\n");
  Graph g = read_edge_list(in);
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.edge(1).u, 1);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream back(out.str());
  EXPECT_TRUE(read_edge_list(back) == g);
}

TEST(GraphIO, NamedVertices) {
  std::istringstream in("a b\nb c\n");
  Graph g = read_edge_list(in);
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(*g.label(0), "a");
  std::istringstream bad("1 2 3\n");
  EXPECT_THROW(read_edge_list(bad), GraphError);
}

TEST(GraphIO, GraphMLRoundTrip) {
  Graph g = complete_bipartite(2, 3);
  std::ostringstream out;
  write_graphml(out, g);
  std::istringstream in(out.str());
  Graph h = read_graphml(in);
  EXPECT_TRUE(h == g);
}
