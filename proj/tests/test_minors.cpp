#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <iostream>

#include <genuskit/minors.hpp>
#include <genuskit/oracle.hpp>
#include <genuskit/planar.hpp>

#include "support/generators.hpp"

using namespace genuskit;
using namespace testsupport;

namespace {

void expect_verified(const Graph& g, const MinorMapping& m) {
  MinorCheck c = verify_minor_mapping(g, m);
  EXPECT_TRUE(c.ok) << c.reason << ": " << c.detail;
}

// the comb properties the construction promises, checked from scratch
void expect_comb_structure(const GridSpec& grid, const VertexSet& a, const CombWitness& w) {
  Graph h = grid.graph();
  for (VertexId v : w.comb) EXPECT_FALSE(w.comb_prime.count(v)) << v;
  EXPECT_EQ(reach_within(h, *w.comb.begin(), w.comb), w.comb);
  EXPECT_EQ(reach_within(h, *w.comb_prime.begin(), w.comb_prime), w.comb_prime);
  for (int i = 0; i < w.l(); ++i) {
    const VertexSet& bs = w.mapping.branch_sets.at(2 + i);
    ASSERT_EQ(bs.size(), 1u);
    VertexId v = *bs.begin();
    EXPECT_TRUE(a.count(v));
    EXPECT_FALSE(w.comb.count(v) || w.comb_prime.count(v));
    auto nb = h.neighbors(v);
    EXPECT_TRUE(std::any_of(nb.begin(), nb.end(), [&](VertexId u) { return w.comb.count(u); }));
    EXPECT_TRUE(std::any_of(nb.begin(), nb.end(), [&](VertexId u) { return w.comb_prime.count(u); }));
  }
  EXPECT_GE(3 * w.l(), static_cast<int>(a.size()));
}

Graph k3r_graph(int r) { return complete_bipartite(3, r); }

MinorMapping identity_witness(const Graph& g) {
  MinorMapping m;
  m.minor = g;
  for (VertexId v : g.vertices()) m.branch_sets[v] = {v};
  return m;
}

// Faces of an orientable rotation given as neighbour orders (simple graph).
std::vector<VertexSet> faces_of(const std::map<VertexId, std::vector<VertexId>>& rot) {
  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<VertexSet> faces;
  for (auto& [u, ns] : rot)
    for (VertexId v : ns) {
      if (seen.count({u, v})) continue;
      VertexSet f;
      VertexId a = u, b = v;
      while (seen.insert({a, b}).second) {
        f.insert(a);
        const auto& rb = rot.at(b);
        auto it = std::find(rb.begin(), rb.end(), a);
        ++it;
        VertexId c = it == rb.end() ? rb.front() : *it;
        a = b;
        b = c;
      }
      faces.push_back(f);
    }
  return faces;
}

// Every rotation system of the connected simple graph gamma; true if one is
// planar and has a face holding all of att.
bool brute_flat(const Graph& gamma, const VertexSet& att) {
  std::vector<VertexId> vs = gamma.vertices();
  if (vs.size() <= 1 || att.size() <= 1) return is_planar(gamma);
  std::map<VertexId, std::vector<VertexId>> rot;
  for (VertexId v : vs) rot[v] = gamma.neighbors(v);
  std::size_t e = gamma.num_edges();
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == vs.size()) {
      auto fs = faces_of(rot);
      if (static_cast<long>(vs.size()) - static_cast<long>(e) + static_cast<long>(fs.size()) != 2) return false;
      for (const VertexSet& f : fs)
        if (std::includes(f.begin(), f.end(), att.begin(), att.end())) return true;
      return false;
    }
    auto& r = rot[vs[i]];
    if (r.size() <= 2) return go(i + 1);
    // fix the first neighbour, permute the rest
    std::sort(r.begin() + 1, r.end());
    do {
      if (go(i + 1)) return true;
    } while (std::next_permutation(r.begin() + 1, r.end()));
    return false;
  };
  return go(0);
}

}  // namespace

TEST(K2rInGrid, CentreOfThreeByThree) {
  GridSpec g{3, 3};
  CombWitness w = k2r_in_grid(g, {g.vertex(1, 1)});
  EXPECT_EQ(w.l(), 1);
  expect_verified(g.graph(), w.mapping);
  expect_comb_structure(g, {g.vertex(1, 1)}, w);
}

TEST(K2rInGrid, AllInteriorOfFiveByFive) {
  GridSpec g{5, 5};
  VertexSet a = g.interior();
  ASSERT_EQ(a.size(), 9u);
  CombWitness w = k2r_in_grid(g, a);
  EXPECT_GE(w.l(), 3);
  expect_verified(g.graph(), w.mapping);
  expect_comb_structure(g, a, w);
}

TEST(K2rInGrid, OneInteriorColumnReachesTheDisjointnessBound) {
  // right branch sets are disjoint and each meets A, so l <= |A| in any
  // K_{2,l} of this kind; the comb reaches it when A sits in one column
  GridSpec g{7, 7};
  for (int j = 1; j <= 5; ++j) {
    VertexSet a;
    for (int i = 1; i <= 5; ++i) a.insert(g.vertex(i, j));
    CombWitness w = k2r_in_grid(g, a);
    EXPECT_EQ(w.l(), 5) << "column " << j;
    EXPECT_GE(w.l(), 2);
    expect_comb_structure(g, a, w);
  }
}

TEST(K2rInGrid, BoundaryAndOutsideVerticesThrow) {
  GridSpec g{4, 4};
  EXPECT_THROW(k2r_in_grid(g, {g.vertex(0, 1)}), GraphError);
  EXPECT_THROW(k2r_in_grid(g, {16}), GraphError);
  EXPECT_THROW(k2r_in_grid(GridSpec{1, 4}, {}), GraphError);
}

TEST(K2rInGrid, EmptySetGivesTwoTrees) {
  GridSpec g{4, 5};
  CombWitness w = k2r_in_grid(g, {});
  EXPECT_EQ(w.l(), 0);
  expect_verified(g.graph(), w.mapping);
}

TEST(K2rInGrid, RandomSetsMeetTheThirdBound) {
  Rng rng(1031);
  int runs = 0;
  for (int r = 3; r <= 8; ++r)
    for (int c = 3; c <= 8; c += 5)
      for (int rep = 0; rep < 20; ++rep) {
        GridSpec g{r, c};
        VertexSet a;
        for (VertexId v : g.interior())
          if (rng() % 2) a.insert(v);
        CombWitness w = k2r_in_grid(g, a);
        expect_verified(g.graph(), w.mapping);
        expect_comb_structure(g, a, w);
        EXPECT_GE(w.l(), static_cast<int>((a.size() + 2) / 3));
        ++runs;
      }
  EXPECT_EQ(runs, 240);
}

TEST(GridCombs, DisjointForEveryShift) {
  for (int r = 2; r <= 7; ++r)
    for (int t = 0; t < 3; ++t) {
      GridSpec g{r, r};
      auto [a, b] = grid_combs(g, t);
      for (VertexId v : a) EXPECT_FALSE(b.count(v));
    }
}

TEST(K3rInApexGrid, ThreeByThreeCentre) {
  GridSpec g{3, 3};
  MinorMapping m = k3r_in_apex_grid(g, {4}, 9);
  EXPECT_EQ(m.minor.num_vertices(), 4u);
  EXPECT_EQ(m.branch_sets.at(2), VertexSet{9});
  expect_verified(apex_grid(g, {4}, 9), m);
}

TEST(K3rInApexGrid, FiveByFiveGivesGenusOne) {
  GridSpec g{5, 5};
  VertexSet a = g.interior();
  Graph host = apex_grid(g, a, 25);
  MinorMapping m = k3r_in_apex_grid(g, a, 25);
  LowerBoundCertificate c = certify_lower_bound(host, m, 0);
  EXPECT_GE(c.r, 3);
  EXPECT_GE(c.implied_bound, 1);
  EXPECT_TRUE(c.exceeds);
}

TEST(K3rInApexGrid, SixBySixTwelveInterior) {
  GridSpec g{6, 6};
  VertexSet a;
  for (VertexId v : g.interior())
    if (a.size() < 12) a.insert(v);
  ASSERT_EQ(a.size(), 12u);
  Graph host = apex_grid(g, a, 36);
  LowerBoundCertificate c = certify_lower_bound(host, k3r_in_apex_grid(g, a, 36), 0);
  EXPECT_GE(c.r, 4);
  EXPECT_EQ(c.implied_bound, (c.r - 2 + 3) / 4);
  EXPECT_GE(c.implied_bound, 1);
}

TEST(K3rInApexGrid, ApexIdCollisionThrows) {
  EXPECT_THROW(apex_grid(GridSpec{3, 3}, {4}, 4), GraphError);
}

TEST(IsFlat, Examples) {
  Graph g = grid_graph(5, 5);
  VertexSet inner;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) inner.insert(i * 5 + j);
  EXPECT_TRUE(is_flat(g, inner));

  Graph two = complete_graph(4);
  Graph island = cycle_graph(5);
  for (VertexId v : island.vertices()) two.add_vertex(10 + v);
  for (auto& [id, e] : island.edge_map()) two.add_edge(10 + e.u, 10 + e.v);
  EXPECT_TRUE(is_flat(two, {10, 11, 12, 13, 14}));

  // K4 with each vertex attached outward: K4 plus a universal vertex is K5
  Graph k = complete_graph(4);
  for (VertexId v = 0; v < 4; ++v) k.add_edge(v, k.add_vertex(10 + v));
  EXPECT_FALSE(is_flat(k, {0, 1, 2, 3}));
  EXPECT_FALSE(is_flat(complete_graph(5), {0, 1, 2, 3, 4}));
}

TEST(IsFlat, AgreesWithRotationSearch) {
  Rng rng(1201);
  int flat = 0, total = 0;
  for (int rep = 0; rep < 150; ++rep) {
    int n = 3 + static_cast<int>(rng() % 4);  // 3..6 vertices in gamma
    int m = n - 1 + static_cast<int>(rng() % (n + 1));
    Graph gamma = random_connected_graph(rng, n, m);
    Graph g = gamma;
    int outside = 1 + static_cast<int>(rng() % 4);  // host up to 10 vertices
    for (int o = 0; o < outside; ++o) {
      VertexId w = g.add_vertex(100 + o);
      for (VertexId v : gamma.vertices())
        if (rng() % 3 == 0) g.add_edge(w, v);
    }
    VertexSet sub;
    for (VertexId v : gamma.vertices()) sub.insert(v);
    VertexSet att;
    for (VertexId v : sub)
      for (VertexId w : g.neighbors(v))
        if (!sub.count(w)) att.insert(v);
    bool want = brute_flat(gamma, att);
    EXPECT_EQ(is_flat(g, sub), want) << "rep " << rep;
    flat += want;
    ++total;
  }
  std::cout << "flat " << flat << " of " << total << "\n";
  EXPECT_GT(flat, 10);
  EXPECT_LT(flat, total - 10);
}

TEST(CertifyLowerBound, Examples) {
  auto k33 = certify_lower_bound(k3r_graph(3), identity_witness(k3r_graph(3)), 0);
  EXPECT_EQ(k33.r, 3);
  EXPECT_EQ(k33.implied_bound, 1);
  EXPECT_TRUE(k33.exceeds);
  EXPECT_EQ(k33.verdict, "eg(G) > 0");

  auto k36 = certify_lower_bound(k3r_graph(6), identity_witness(k3r_graph(6)), 0);
  EXPECT_EQ(k36.implied_bound, 1);
  EXPECT_TRUE(k36.exceeds);

  auto k310 = certify_lower_bound(k3r_graph(10), identity_witness(k3r_graph(10)), 1);
  EXPECT_EQ(k310.implied_bound, 2);
  EXPECT_TRUE(k310.exceeds);
  EXPECT_EQ(k310.verdict, "eg(G) > 1");

  auto low = certify_lower_bound(k3r_graph(6), identity_witness(k3r_graph(6)), 1);
  EXPECT_FALSE(low.exceeds);

  // r on the other side: K_{2,3} counts as K_{3,2}
  auto k23 = certify_lower_bound(complete_bipartite(2, 3), identity_witness(complete_bipartite(2, 3)), 0);
  EXPECT_EQ(k23.r, 2);
  EXPECT_EQ(k23.implied_bound, 0);
}

TEST(CertifyLowerBound, RejectsBadWitnesses) {
  Graph g = k3r_graph(3);
  MinorMapping m = identity_witness(g);
  m.branch_sets[0] = {0, 1};  // overlaps branch set 1
  EXPECT_THROW(certify_lower_bound(g, m, 0), GraphError);
  EXPECT_THROW(certify_lower_bound(complete_graph(4), identity_witness(complete_graph(4)), 0), GraphError);
  EXPECT_THROW(certify_lower_bound(k3r_graph(3), identity_witness(complete_bipartite(4, 4)), 0), GraphError);
}

TEST(CertifyLowerBound, JsonRoundTrip) {
  MinorMapping m = k3r_in_apex_grid(GridSpec{5, 5}, GridSpec{5, 5}.interior(), 25);
  MinorMapping back = minor_mapping_from_json(to_json(m));
  EXPECT_EQ(back.minor, m.minor);
  EXPECT_EQ(back.branch_sets, m.branch_sets);
  MinorMapping short_form =
      minor_mapping_from_json(R"({"minor":{"complete_bipartite":[3,3]},"branch_sets":{"0":[0],"1":[1],"2":[2],"3":[3],"4":[4],"5":[5]}})");
  EXPECT_TRUE(certify_lower_bound(k3r_graph(3), short_form, 0).exceeds);
  EXPECT_THROW(minor_mapping_from_json("{}"), GraphError);
}

TEST(FindK3r, SubdividedK33) {
  Graph g;
  for (VertexId v = 0; v < 6; ++v) g.add_vertex(v);
  VertexId next = 6;
  for (VertexId a = 0; a < 3; ++a)
    for (VertexId b = 3; b < 6; ++b) {
      g.add_vertex(next);
      g.add_edge(a, next);
      g.add_edge(next, b);
      ++next;
    }
  auto m = find_k3r_minor(g);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(certify_lower_bound(g, *m, 0).r, 3);
  EXPECT_FALSE(find_k3r_minor(path_graph(4)).has_value());
}

TEST(FindK3r, ImpliedBoundNeverExceedsTheOracle) {
  Rng rng(1307);
  int checked = 0, positive = 0;
  for (int rep = 0; rep < 80; ++rep) {
    int n = 6 + static_cast<int>(rng() % 4);
    Graph g = random_connected_graph(rng, n, n + 3 + static_cast<int>(rng() % 6));
    auto m = find_k3r_minor(g);
    if (!m) continue;
    LowerBoundCertificate c = certify_lower_bound(g, *m, 0);
    OracleBudget b;
    b.time_limit = 10;
    OracleResult o = exact_euler_genus(g, b);
    if (!o.exact) continue;
    EXPECT_LE(c.implied_bound, o.euler_genus);
    ++checked;
    positive += c.implied_bound > 0;
  }
  std::cout << "checked " << checked << " positive bounds " << positive << "\n";
  EXPECT_GE(checked, 50);
  EXPECT_GT(positive, 0);
}

TEST(PlanarizingSet, LeavesAPlanarGraph) {
  Rng rng(1409);
  for (int rep = 0; rep < 30; ++rep) {
    Graph g = random_connected_graph(rng, 10, 25);
    VertexSet x = planarizing_set(g);
    EXPECT_TRUE(is_planar(remove_vertices(g, x)));
  }
  EXPECT_TRUE(planarizing_set(grid_graph(4, 4)).empty());
  EXPECT_EQ(planarizing_set(complete_graph(5)).size(), 1u);
}

TEST(FlatGridMinor, PlanarGridReturnsItsInterior) {
  Graph g = grid_graph(9, 9);
  FlatGridResult r = flat_grid_minor(g, 1);
  ASSERT_EQ(r.kind, FlatGridResult::Kind::Flat) << r.note;
  EXPECT_TRUE(r.planarizing.empty());
  EXPECT_EQ(r.grid_size, 6);
  EXPECT_EQ(r.tile_size, 4);
  EXPECT_TRUE(is_flat(g, r.flat));
  expect_verified(g, r.grid_minor);
  EXPECT_EQ(r.c, 4);
}

TEST(FlatGridMinor, ApexOnOneRegionLeavesAnUntouchedTile) {
  // apex on a 3x3 block in the far corner; G is not planar
  Graph g = grid_graph(9, 9);
  g.add_vertex(81);
  for (int i = 6; i <= 8; ++i)
    for (int j = 6; j <= 8; ++j) g.add_edge(81, i * 9 + j);
  ASSERT_FALSE(is_planar(g));
  FlatGridResult r = flat_grid_minor(g, 1);
  ASSERT_EQ(r.kind, FlatGridResult::Kind::Flat) << r.note;
  EXPECT_EQ(r.planarizing, VertexSet{81});
  EXPECT_EQ(r.tiles, 4);
  for (VertexId v : r.flat) EXPECT_FALSE(g.adjacent(v, 81));
  EXPECT_TRUE(is_flat(g, r.flat));
  expect_verified(g, r.grid_minor);
}

TEST(FlatGridMinor, DenseApexGivesACertificate) {
  GridSpec spec{9, 9};
  Graph g = apex_grid(spec, spec.interior(), 81);
  FlatGridResult r = flat_grid_minor(g, 0);
  ASSERT_EQ(r.kind, FlatGridResult::Kind::Certificate) << r.note;
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_TRUE(r.certificate->exceeds);
  expect_verified(g, r.certificate->witness);
  std::cout << "r=" << r.certificate->r << " bound=" << r.certificate->implied_bound << "\n";
}

TEST(FlatGridMinor, NoGridIsScaleInsufficient) {
  FlatGridResult r = flat_grid_minor(complete_graph(6), 0);
  EXPECT_EQ(r.kind, FlatGridResult::Kind::ScaleInsufficient);
  EXPECT_FALSE(r.certificate.has_value());
  EXPECT_NE(r.note.find("scale insufficient"), std::string::npos);
}
