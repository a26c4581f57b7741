#include "genuskit/planar.hpp"

#include <algorithm>
#include <map>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/graph_traits.hpp>

#include "genuskit/surgery.hpp"

namespace genuskit {

namespace {

using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                     boost::property<boost::vertex_index_t, int>,
                                     boost::property<boost::edge_index_t, int>>;
using BEdge = boost::graph_traits<BGraph>::edge_descriptor;

}  // namespace

PlanarResult planar_embed(const Graph& g) {
  PlanarResult out;
  std::vector<VertexId> vs = g.vertices();
  std::map<VertexId, int> idx;
  for (std::size_t i = 0; i < vs.size(); ++i) idx[vs[i]] = static_cast<int>(i);

  // Boost wants a simple graph; parallel edges and loops are re-inserted after
  BGraph bg(vs.size());
  std::vector<EdgeId> bedge;  // boost edge index -> our edge id
  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<EdgeId> extra;
  for (EdgeId id : g.edges()) {
    const Edge& e = g.edge(id);
    auto key = std::minmax(e.u, e.v);
    if (e.is_loop() || !seen.insert(key).second) {
      extra.push_back(id);
      continue;
    }
    auto [be, ok] = boost::add_edge(idx[e.u], idx[e.v], bg);
    (void)ok;
    boost::put(boost::edge_index, bg, be, static_cast<int>(bedge.size()));
    bedge.push_back(id);
  }

  std::vector<std::vector<BEdge>> storage(vs.size());
  auto emb = boost::make_iterator_property_map(storage.begin(), boost::get(boost::vertex_index, bg));
  std::vector<BEdge> kedges;
  bool planar = boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = bg,
                                                    boost::boyer_myrvold_params::embedding = emb,
                                                    boost::boyer_myrvold_params::kuratowski_subgraph =
                                                        std::back_inserter(kedges));
  out.planar = planar;
  if (!planar) {
    Graph k;
    for (const BEdge& be : kedges) {
      EdgeId id = bedge[boost::get(boost::edge_index, bg, be)];
      const Edge& e = g.edge(id);
      k.add_vertex(e.u);
      k.add_vertex(e.v);
      k.add_edge(id, e.u, e.v);
    }
    // boost may hand back dangling edges; strip leaves, then shrink to a
    // minimal non-planar subgraph if that is not enough
    auto prune = [](Graph& h) {
      bool again = true;
      while (again) {
        again = false;
        for (VertexId v : h.vertices())
          if (h.degree(v) <= 1) {
            h.remove_vertex(v);
            again = true;
          }
      }
    };
    prune(k);
    if (classify_kuratowski(k).empty()) {
      for (EdgeId id : k.edges()) {
        Graph t = k;
        t.remove_edge(id);
        if (!planar_embed(t).planar) k = std::move(t);
      }
      prune(k);
    }
    out.kuratowski_kind = classify_kuratowski(k);
    out.kuratowski = std::move(k);
    return out;
  }

  SurfaceEmbedding se;
  se.graph = g;
  for (EdgeId id : extra) se.graph.remove_edge(id);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    VertexId v = vs[i];
    auto& rot = se.rot.rotation[v];
    for (const BEdge& be : storage[i]) {
      EdgeId id = bedge[boost::get(boost::edge_index, bg, be)];
      rot.push_back(make_dart(id, g.edge(id).u == v ? 0 : 1));
    }
  }
  for (EdgeId id : se.graph.edges()) se.rot.signature[id] = 1;
  if (se.euler_genus() != 0) {
    // boost's orientation is consistent, so this only guards against a
    // mismatched convention
    reflect(se);
    if (se.euler_genus() != 0) throw EmbeddingError("planar_embed: conversion failed");
  }
  for (EdgeId id : extra) {
    const Edge& e = g.edge(id);
    auto ins = insert_edge_best(se, e.u, e.v, id);
    if (ins.delta != 0) throw EmbeddingError("planar_embed: parallel edge raised genus");
  }
  out.embedding = std::move(se);
  return out;
}

bool is_planar(const Graph& g) { return planar_embed(g).planar; }

std::string classify_kuratowski(const Graph& sub) {
  std::vector<VertexId> branch;
  for (VertexId v : sub.vertices()) {
    std::size_t d = sub.degree(v);
    if (d == 2) continue;
    if (d != 3 && d != 4) return "";
    branch.push_back(v);
  }
  if (!is_connected(sub)) return "";
  // walk threads between branch vertices
  std::set<VertexId> bset(branch.begin(), branch.end());
  std::map<std::pair<VertexId, VertexId>, int> links;
  for (VertexId b : branch)
    for (EdgeId e0 : sub.incident(b)) {
      VertexId cur = sub.other(e0, b);
      EdgeId via = e0;
      while (!bset.count(cur)) {
        const auto& inc = sub.incident(cur);
        EdgeId nxt = inc[0] == via ? inc[1] : inc[0];
        cur = sub.other(nxt, cur);
        via = nxt;
      }
      if (cur == b) return "";
      ++links[std::minmax(b, cur)];
    }
  for (auto& [k, c] : links)
    if (c != 2) return "";  // each thread seen once from each end
  if (branch.size() == 5 && links.size() == 10) {
    for (VertexId b : branch)
      if (sub.degree(b) != 4) return "";
    return "K5";
  }
  if (branch.size() == 6 && links.size() == 9) {
    for (VertexId b : branch)
      if (sub.degree(b) != 3) return "";
    // bipartite check on the branch graph
    Graph bgph;
    for (VertexId b : branch) bgph.add_vertex(b);
    for (auto& [k, c] : links) bgph.add_edge(k.first, k.second);
    if (is_bipartite(bgph)) return "K33";
  }
  return "";
}

std::vector<std::int64_t> face_key(const FaceWalk& w) {
  std::vector<std::int64_t> f = w.flags;
  if (f.empty()) return {-1 - w.isolated};
  auto best = f;
  for (std::size_t i = 1; i < f.size(); ++i) {
    std::rotate(f.begin(), f.begin() + 1, f.end());
    if (f < best) best = f;
  }
  return best;
}

VertexSet face_vertices(const FaceWalk& w) {
  VertexSet s(w.vertices.begin(), w.vertices.end());
  if (w.isolated >= 0) s.insert(w.isolated);
  return s;
}

EdgeSet face_edges(const FaceWalk& w) {
  EdgeSet s;
  for (Dart d : w.darts) s.insert(dart_edge(d));
  return s;
}

void reflect(SurfaceEmbedding& e) {
  for (auto& [v, rot] : e.rot.rotation) std::reverse(rot.begin(), rot.end());
}

}  // namespace genuskit
