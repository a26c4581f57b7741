#include <gtest/gtest.h>

#include <functional>
#include <iostream>

#include <nlohmann/json.hpp>

#include <genuskit/decompositions.hpp>
#include <genuskit/planar.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace genuskit;
using namespace testsupport;

namespace {

// Path 0..n-1 plus apices n, n+1, ...; touch[i] lists apex indices seen by i.
ApexInstance path_instance(int n, int apices, const std::vector<std::vector<int>>& touch) {
  Graph g = path_graph(n);
  for (int a = 0; a < apices; ++a) g.add_vertex(n + a);
  for (int i = 0; i < n; ++i)
    for (int a : touch[i]) g.add_edge(i, n + a);
  VertexSet x;
  for (int a = 0; a < apices; ++a) x.insert(n + a);
  return ApexInstance::make(g, x);
}

PathRef whole_path(int n) {
  std::vector<VertexId> vs(n);
  for (int i = 0; i < n; ++i) vs[i] = i;
  return path_from_vertices(path_graph(n), vs);
}

// Every part coupled, and together exactly the apex edges on the path.
void expect_exact_coupled(const ApexInstance& inst, const CoupledPartition& cp, const EdgeSet& want) {
  std::map<EdgeId, int> seen;
  for (auto& c : cp.parts) {
    auto v = is_coupled(inst, c);
    ASSERT_TRUE(v.ok) << v.why;
    for (EdgeId e : c.edges) ++seen[e];
  }
  EdgeSet got;
  for (auto& [e, k] : seen) {
    ASSERT_EQ(k, 1) << "edge " << e;
    got.insert(e);
  }
  EXPECT_EQ(got, want);
  EXPECT_EQ(cp.k, static_cast<int>(cp.parts.size()));
}

EdgeSet apex_edges_on(const ApexInstance& inst, const PathRef& p) {
  EdgeSet out;
  for (VertexId v : p.vertices)
    for (EdgeId e : inst.graph.incident(v))
      if (inst.apices.count(inst.graph.other(e, v))) out.insert(e);
  return out;
}

// theta graph: s=0, t=1, three paths through a=2, b=3, c=4
Graph theta() {
  Graph g;
  for (int i = 0; i < 5; ++i) g.add_vertex(i);
  for (int m = 2; m < 5; ++m) {
    g.add_edge(0, m);
    g.add_edge(m, 1);
  }
  return g;
}

}  // namespace

TEST(Coupled, PredicateRejections) {
  auto inst = path_instance(3, 2, {{0}, {0, 1}, {1}});
  CoupledSet c;
  c.path = whole_path(3);
  c.x1 = 3;
  c.x2 = 4;
  c.edges = apex_edges_on(inst, c.path);
  EXPECT_TRUE(is_coupled(inst, c).ok);
  CoupledSet miss = c;
  miss.edges.erase(*inst.graph.edges_between(1, 3).begin());  // internal vertex 1 loses an edge
  EXPECT_FALSE(is_coupled(inst, miss).ok);
  CoupledSet endpoint = c;
  endpoint.edges.erase(*inst.graph.edges_between(0, 3).begin());  // fine at an endpoint
  EXPECT_TRUE(is_coupled(inst, endpoint).ok);
  CoupledSet wrong = c;
  wrong.x2 = -1;  // edges to 4 no longer allowed
  EXPECT_FALSE(is_coupled(inst, wrong).ok);
  CoupledSet broken = c;
  broken.path.vertices = {0, 2};
  broken.path.edges = {broken.path.edges[0]};
  EXPECT_FALSE(is_coupled(inst, broken).ok);
}

TEST(Interleaving, SingleApexIsOnePart) {
  auto inst = path_instance(6, 3, {{0}, {}, {0}, {0}, {}, {0}});
  auto r = interleaving_decompose(inst, whole_path(6), {6, 7, 8});
  EXPECT_EQ(r.k, 1);
  expect_exact_coupled(inst, r, apex_edges_on(inst, whole_path(6)));
}

TEST(Interleaving, AlternatingTriple) {
  std::vector<std::vector<int>> touch{{0}, {1}, {2}, {0}, {1}, {2}};
  auto inst = path_instance(6, 3, touch);
  auto r = interleaving_decompose(inst, whole_path(6), {6, 7, 8});
  int brute = exhaustive_interleaving(6, touch);
  EXPECT_EQ(r.k, brute);
  EXPECT_EQ(brute, 3);  // frozen from the exhaustive search
  expect_exact_coupled(inst, r, apex_edges_on(inst, whole_path(6)));
}

TEST(Interleaving, Errors) {
  auto inst = path_instance(3, 3, {{0}, {1}, {2}});
  EXPECT_THROW(interleaving_decompose(inst, whole_path(3), {3, 3, 4}), GraphError);
  EXPECT_THROW(interleaving_decompose(inst, whole_path(3), {0, 3, 4}), GraphError);
  PathRef off{{0, 7}, {0}};
  EXPECT_THROW(interleaving_decompose(inst, off, {3, 4, 5}), GraphError);
}

TEST(Interleaving, MatchesExhaustiveOnSmallPaths) {
  Rng rng(601);
  int checked = 0;
  for (int it = 0; it < 400; ++it) {
    int n = 1 + static_cast<int>(rng() % 8);
    std::vector<std::vector<int>> touch(n);
    int budget = 1 + static_cast<int>(rng() % 8);  // at most 8 apex edges
    for (int e = 0; e < budget; ++e) {
      int v = static_cast<int>(rng() % n), a = static_cast<int>(rng() % 3);
      if (std::find(touch[v].begin(), touch[v].end(), a) == touch[v].end()) touch[v].push_back(a);
    }
    auto inst = path_instance(n, 3, touch);
    auto p = whole_path(n);
    auto r = interleaving_decompose(inst, p, {n, n + 1, n + 2});
    ASSERT_EQ(r.k, exhaustive_interleaving(n, touch)) << "case " << it;
    expect_exact_coupled(inst, r, apex_edges_on(inst, p));
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST(CoupledFull, OneApexPairsWithDummy) {
  auto inst = path_instance(7, 1, {{}, {0}, {0}, {}, {}, {0}, {}});
  auto r = coupled_decompose_full(inst, whole_path(7));
  ASSERT_EQ(r.k, 1);
  EXPECT_EQ(r.parts[0].x2, -1);
  EXPECT_EQ(r.parts[0].path.front(), 1);
  EXPECT_EQ(r.parts[0].path.back(), 5);
  expect_exact_coupled(inst, r, apex_edges_on(inst, whole_path(7)));
}

TEST(CoupledFull, TwoApicesEqualsTripleWithIdleThird) {
  Rng rng(602);
  for (int it = 0; it < 100; ++it) {
    int n = 2 + static_cast<int>(rng() % 7);
    std::vector<std::vector<int>> touch(n);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < 2; ++a)
        if (rng() % 2) touch[i].push_back(a);
    auto two = path_instance(n, 2, touch);
    // third apex hangs off a vertex that is not on the path
    Graph g = two.graph;
    g.add_vertex(100);
    g.add_edge(100, 0);
    g.add_vertex(101);
    g.add_edge(101, 100);
    auto three = ApexInstance::make(g, {n, n + 1, 101});
    std::vector<VertexId> vs(n);
    std::iota(vs.begin(), vs.end(), 0);
    auto p = path_from_vertices(three.planar_piece, vs);
    ASSERT_EQ(coupled_decompose_full(two, p).k, interleaving_decompose(three, p, {n, n + 1, 101}).k);
  }
}

TEST(CoupledFull, RandomThreeApicesOnTenVertexPath) {
  Rng rng(603);
  for (int it = 0; it < 50; ++it) {
    std::vector<std::vector<int>> touch(10);
    for (auto& t : touch)
      for (int a = 0; a < 3; ++a)
        if (rng() % 3 == 0) t.push_back(a);
    auto inst = path_instance(10, 3, touch);
    auto r = coupled_decompose_full(inst, whole_path(10));
    expect_exact_coupled(inst, r, apex_edges_on(inst, whole_path(10)));
  }
}

TEST(CoupledFull, TargetEdgesBlockInternalVertices) {
  auto inst = path_instance(3, 1, {{0}, {0}, {0}});
  EdgeSet target = apex_edges_on(inst, whole_path(3));
  target.erase(*inst.graph.edges_between(1, 3).begin());
  auto r = coupled_decompose_edges(inst, whole_path(3), target);
  EXPECT_EQ(r.k, 2);  // vertex 1 may only be an endpoint
  for (auto& c : r.parts) EXPECT_TRUE(is_coupled(inst, c).ok);
  EXPECT_THROW(coupled_decompose_edges(inst, whole_path(3), {0, 1}), GraphError);  // path edges
}

// --- kissing ----------------------------------------------------------------

TEST(Kissing, NoApexEdgesIsEmpty) {
  auto inst = ApexInstance::make(complete_graph(4), {});
  auto k = kissing_decomposition(inst);
  EXPECT_TRUE(k.pieces.empty());
  EXPECT_TRUE(validate_kissing(inst, k).ok);
}

TEST(Kissing, RejectsCutVertex) {
  Graph g = path_graph(3);
  EXPECT_THROW(kissing_decomposition(ApexInstance::make(g, {})), GraphError);
}

TEST(Kissing, SingleApexOnOneFace) {
  Graph g = cycle_graph(7);
  g.add_vertex(7);
  for (int i = 0; i < 7; ++i) g.add_edge(7, i);
  auto inst = ApexInstance::make(g, {7});
  auto k = kissing_decomposition(inst);
  EXPECT_EQ(k.faces.size(), 1u);
  EXPECT_GE(k.pieces.size(), 1u);
  EXPECT_LE(k.pieces.size(), 3u);
  auto v = validate_kissing(inst, k);
  EXPECT_TRUE(v.ok) << v.why;
}

TEST(Kissing, CaseThreeOnTheta) {
  Graph g = theta();
  g.add_vertex(5);  // x1
  g.add_vertex(6);  // x2
  for (VertexId v : {0, 2, 1}) g.add_edge(5, v);
  g.add_edge(6, 4);
  auto inst = ApexInstance::make(g, {5, 6});
  const Graph& h = inst.planar_piece;
  CoupledSet a{path_from_vertices(h, {0, 2, 1}), 5, 6, {}};
  CoupledSet b{path_from_vertices(h, {0, 4, 1}), 5, 6, {}};
  for (VertexId v : {0, 2, 1}) a.edges.insert(*g.edges_between(5, v).begin());
  b.edges.insert(*g.edges_between(6, 4).begin());
  ASSERT_TRUE(is_coupled(inst, a).ok);
  ASSERT_TRUE(is_coupled(inst, b).ok);
  EXPECT_EQ(kissing_case(inst, inst.stored_drawing(), a, b), 3);
  // an apex edge at s owned by neither breaks case 3
  Graph g2 = g;
  EdgeId extra = g2.add_edge(6, 0);
  auto inst2 = ApexInstance::make(g2, {5, 6});
  EXPECT_EQ(kissing_case(inst2, inst2.stored_drawing(), a, b), 0);
  (void)extra;
  // disjoint and single-endpoint cases
  CoupledSet lone{path_from_vertices(h, {4}), 6, -1, b.edges};
  CoupledSet left{path_from_vertices(h, {0, 2}), 5, -1, {}};
  EXPECT_EQ(kissing_case(inst, inst.stored_drawing(), left, lone), 1);
  CoupledSet right{path_from_vertices(h, {2, 1}), 5, -1, {}};
  EXPECT_EQ(kissing_case(inst, inst.stored_drawing(), left, right), 2);
}

TEST(Kissing, CaseThreeSeesInteriorVertices) {
  // a square 0-1-2-3 with a hub 4 inside; the two halves of the square
  // bound the disk holding the hub, which carries an apex edge
  Graph g = cycle_graph(4);
  g.add_vertex(4);
  for (int i = 0; i < 4; ++i) g.add_edge(4, i);
  g.add_vertex(5);
  g.add_edge(5, 4);
  g.add_edge(5, 1);
  auto inst = ApexInstance::make(g, {5});
  const SurfaceEmbedding& d = inst.stored_drawing();
  const Graph& h = inst.planar_piece;
  CoupledSet a{path_from_vertices(h, {0, 1, 2}), 5, -1, {*g.edges_between(5, 1).begin()}};
  CoupledSet b{path_from_vertices(h, {0, 3, 2}), 5, -1, {}};
  // the hub is strictly inside unless face 0 lies on its side
  int got = kissing_case(inst, d, a, b);
  auto fd = d.faces();
  bool hub_on_outer = face_vertices(fd.faces[0]).count(4) > 0;
  EXPECT_EQ(got, hub_on_outer ? 3 : 0);
}

TEST(Kissing, RandomBiconnectedInstancesValidate) {
  Rng rng(611);
  long pieces = 0, faces = 0, singles = 0;
  int checked = 0;
  for (int it = 0; it < 120; ++it) {
    Graph h = random_biconnected_planar(rng, 5 + static_cast<int>(rng() % 9), static_cast<int>(rng() % 6));
    VertexSet x;
    Graph g = add_random_apices(rng, h, 1 + static_cast<int>(rng() % 3), 0.3, &x);
    auto inst = ApexInstance::make(g, x);
    auto k = kissing_decomposition(inst);
    auto v = validate_kissing(inst, k);
    ASSERT_TRUE(v.ok) << "case " << it << ": " << v.why;
    auto r = centipede_butterfly(inst);
    auto w = validate_pieces(inst, r);
    ASSERT_TRUE(w.ok) << "case " << it << ": " << w.why;
    pieces += static_cast<long>(r.pieces.size());
    faces += r.counts["faces"];
    singles += r.counts["single_vertex_pieces"];
    ++checked;
  }
  EXPECT_EQ(checked, 120);
  std::cout << "[kissing] instances=" << checked << " faces=" << faces << " pieces=" << pieces
            << " single-vertex=" << singles << "\n";
}

// --- centipedes and butterflies ---------------------------------------------

TEST(Centipede, OneFaceAllCentipedes) {
  Graph g = cycle_graph(6);
  g.add_vertex(6);
  g.add_vertex(7);
  for (int i = 0; i < 3; ++i) g.add_edge(6, i);
  for (int i = 3; i < 6; ++i) g.add_edge(7, i);
  auto inst = ApexInstance::make(g, {6, 7});
  auto r = centipede_butterfly(inst);
  EXPECT_EQ(r.counts["butterflies"], 0);
  EXPECT_GE(r.pieces.size(), 1u);
  for (auto& p : r.pieces) EXPECT_EQ(p.kind, Piece::Kind::Centipede);
  EXPECT_TRUE(validate_pieces(inst, r).ok);
  auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["pieces"].size(), r.pieces.size());
  EXPECT_TRUE(j["bounds"].contains("faces"));
}

TEST(Centipede, RejectsPathOffTheFace) {
  Graph g = complete_graph(4);
  g.add_vertex(4);
  g.add_edge(4, 0);
  auto inst = ApexInstance::make(g, {4});
  const SurfaceEmbedding& d = inst.stored_drawing();
  CoupledSet c{path_from_vertices(inst.planar_piece, {0, 1}), 4, -1, {*g.edges_between(4, 0).begin()}};
  int on = 0, off = 0;
  for (int f = 0; f < 4; ++f) (is_centipede(inst, d, f, c).ok ? on : off)++;
  EXPECT_EQ(on, 2);  // an edge borders two triangles
  EXPECT_EQ(off, 2);
}

TEST(Butterfly, ThetaComponent) {
  Graph g = theta();
  g.add_vertex(5);
  g.add_vertex(6);
  EdgeId ax = g.add_edge(5, 2), sx = g.add_edge(5, 0), tx = g.add_edge(6, 1);
  auto inst = ApexInstance::make(g, {5, 6});
  const Graph& h = inst.planar_piece;
  Butterfly b;
  b.s = 0;
  b.t = 1;
  b.x1 = 5;
  b.x2 = 6;
  b.vertices = {0, 1, 2};
  b.edges = {*h.edges_between(0, 2).begin(), *h.edges_between(2, 1).begin()};
  b.r = {ax, sx, tx};
  auto v = is_butterfly(inst, b);
  EXPECT_TRUE(v.ok) << v.why;
  Butterfly missing = b;
  missing.r.erase(ax);
  EXPECT_FALSE(is_butterfly(inst, missing).ok);
  Butterfly two = b;
  two.vertices.insert(3);
  two.edges.insert(*h.edges_between(0, 3).begin());
  two.edges.insert(*h.edges_between(3, 1).begin());
  EXPECT_FALSE(is_butterfly(inst, two).ok);
  Butterfly single;
  single.s = single.t = 2;
  single.x1 = 5;
  single.vertices = {2};
  single.r = {ax};
  EXPECT_TRUE(is_butterfly(inst, single).ok);
}

TEST(Butterfly, EndpointsMustShareAFaceWithR) {
  // K5 minus s-t: planar, but s, t and a cannot all sit on one face
  Graph g = complete_graph(5);
  g.remove_edge(*g.edges_between(0, 4).begin());
  g.add_vertex(5);
  EdgeId ra = g.add_edge(5, 1);
  auto inst = ApexInstance::make(g, {5});
  Butterfly b;
  b.s = 0;
  b.t = 4;
  b.x1 = 5;
  b.vertices = {0, 1, 2, 3, 4};
  for (EdgeId e : inst.planar_piece.edges()) b.edges.insert(e);
  b.r = {ra};
  auto v = is_butterfly(inst, b);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.why.find("face"), std::string::npos);
}
