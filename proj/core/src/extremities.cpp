#include "genuskit/extremities.hpp"

#include <algorithm>

#include "genuskit/planar.hpp"
#include "genuskit/surgery.hpp"

namespace genuskit {

namespace {

// C plus the apex edges into it plus an auxiliary apex-portal edge
Graph with_apex(const ApexInstance& inst, const Extremity& c, VertexId x, EdgeId aux) {
  Graph p = edge_subgraph(inst.planar_piece, c.edges);
  for (VertexId v : c.vertices) p.add_vertex(v);
  p.add_vertex(x);
  for (EdgeId e : inst.graph.incident(x)) {
    VertexId w = inst.graph.other(e, x);
    if (c.vertices.count(w) && !p.has_edge(e)) p.add_edge(e, inst.graph.edge(e).u, inst.graph.edge(e).v);
  }
  p.add_edge(aux, x, c.portal);
  return p;
}

EdgeId above(const Graph& a, const Graph& b) { return std::max(a.max_edge_id(), b.max_edge_id()) + 1; }

VertexSet apex_neighbours(const ApexInstance& inst, const Extremity& c) {
  VertexSet out;
  for (VertexId w : c.vertices) {
    if (w == c.portal) continue;
    for (VertexId n : inst.graph.neighbors(w))
      if (inst.apices.count(n)) out.insert(n);
  }
  return out;
}

}  // namespace

ExtremityCheck check_extremity(const ApexInstance& inst, const Extremity& c) {
  const Graph& h = inst.planar_piece;
  ExtremityCheck r;
  if (c.edges.empty()) return {false, "blocks"};
  VertexSet ends;
  for (EdgeId e : c.edges) {
    if (!h.has_edge(e)) return {false, "blocks"};
    ends.insert(h.edge(e).u);
    ends.insert(h.edge(e).v);
  }
  if (ends != c.vertices || !is_connected(edge_subgraph(h, c.edges))) return {false, "blocks"};
  auto bct = biconnected_decompose(h);
  for (auto& b : bct.blocks) {
    std::size_t in = 0;
    for (EdgeId e : b) in += c.edges.count(e);
    if (in != 0 && in != b.size()) return {false, "blocks"};
  }
  if (!c.vertices.count(c.portal) || !bct.cut_vertices.count(c.portal)) return {false, "portal"};
  for (auto& [id, e] : h.edge_map()) {
    if (c.edges.count(id)) continue;
    if ((c.vertices.count(e.u) && e.u != c.portal) || (c.vertices.count(e.v) && e.v != c.portal))
      return {false, "boundary"};
  }
  VertexSet xs = apex_neighbours(inst, c);
  if (xs.size() > 1 || (xs.size() == 1 && (!c.apex || *c.apex != *xs.begin()))) return {false, "apex"};
  if (c.apex) {
    if (!inst.apices.count(*c.apex)) return {false, "apex"};
    if (!is_planar(with_apex(inst, c, *c.apex, above(inst.graph, h)))) return {false, "planarity"};
  }
  r.ok = true;
  return r;
}

std::vector<Extremity> find_extremities(const ApexInstance& inst) {
  const Graph& h = inst.planar_piece;
  auto bct = biconnected_decompose(h);
  std::vector<Extremity> cands;
  for (VertexId v : bct.cut_vertices) {
    Graph rest = remove_vertices(h, {v});
    auto nb = h.neighbors(v);
    struct Branch {
      Extremity part;
      std::optional<VertexId> tag;
    };
    std::vector<Branch> ok;
    for (const VertexSet& k : connected_components(rest)) {
      bool touches = false;
      for (VertexId w : nb) touches |= k.count(w) > 0;
      if (!touches) continue;
      Branch b;
      b.part.portal = v;
      b.part.vertices = k;
      b.part.vertices.insert(v);
      for (auto& [id, e] : h.edge_map())
        if (e.u != e.v && b.part.vertices.count(e.u) && b.part.vertices.count(e.v)) b.part.edges.insert(id);
      VertexSet xs = apex_neighbours(inst, b.part);
      if (xs.size() > 1) continue;
      if (!xs.empty()) {
        b.tag = *xs.begin();
        b.part.apex = b.tag;
        if (!check_extremity(inst, b.part).ok) continue;
      }
      ok.push_back(std::move(b));
    }
    if (ok.empty()) continue;
    // one candidate per apex seen here, plus the apex-free one
    std::set<std::optional<VertexId>> tags{std::nullopt};
    for (auto& b : ok)
      if (b.tag) tags.insert(b.tag);
    std::optional<Extremity> best;
    for (auto& t : tags) {
      Extremity c;
      c.portal = v;
      c.apex = t;
      for (auto& b : ok)
        if (!b.tag || b.tag == t) {
          c.vertices.insert(b.part.vertices.begin(), b.part.vertices.end());
          c.edges.insert(b.part.edges.begin(), b.part.edges.end());
        }
      if (c.edges.empty() || !check_extremity(inst, c).ok) continue;
      if (!best || c.edges.size() > best->edges.size()) best = std::move(c);
    }
    if (best) cands.push_back(std::move(*best));
  }

  std::vector<Extremity> maximal;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    bool inside = false;
    for (std::size_t j = 0; j < cands.size() && !inside; ++j)
      if (i != j && cands[j].edges.size() > cands[i].edges.size() &&
          std::includes(cands[j].edges.begin(), cands[j].edges.end(), cands[i].edges.begin(), cands[i].edges.end()))
        inside = true;
    if (!inside) maximal.push_back(cands[i]);
  }

  std::vector<Extremity> out;
  for (auto& c : maximal) {
    bool clash = false;
    for (auto& d : out) {
      for (EdgeId e : c.edges) clash |= d.edges.count(e) > 0;
      for (VertexId w : c.vertices) {
        if (w != c.portal && d.vertices.count(w)) clash = true;
        if (w != d.portal && d.vertices.count(w) && w != c.portal) clash = true;
      }
      if (d.vertices.count(c.portal) && c.portal != d.portal) clash = true;
      if (c.vertices.count(d.portal) && c.portal != d.portal) clash = true;
    }
    if (!clash) out.push_back(c);
  }
  return out;
}

ExpandResult contract_then_expand(const ApexInstance& inst, const std::vector<Extremity>& ext,
                                  const EmbedFn& embed) {
  for (std::size_t i = 0; i < ext.size(); ++i) {
    auto chk = check_extremity(inst, ext[i]);
    if (!chk.ok) throw GraphError("extremity " + std::to_string(i) + " invalid: " + chk.reason);
    for (std::size_t j = 0; j < i; ++j) {
      for (EdgeId e : ext[i].edges)
        if (ext[j].edges.count(e)) throw GraphError("extremities share an edge");
      for (VertexId w : ext[i].vertices)
        if (ext[j].vertices.count(w) && (w != ext[i].portal || w != ext[j].portal))
          throw GraphError("extremities overlap away from a shared portal");
    }
  }

  ExpandResult res;
  Graph gp = inst.graph;
  EdgeId next = inst.graph.max_edge_id() + 1;
  std::vector<EdgeId> added;  // portal-apex edges that are not in G
  for (const Extremity& c : ext) {
    VertexSet inner = c.vertices;
    inner.erase(c.portal);
    bool sees = !apex_neighbours(inst, c).empty();
    for (VertexId w : inner) gp.remove_vertex(w);
    if (sees && !gp.adjacent(*c.apex, c.portal)) {
      gp.add_edge(next, c.portal, *c.apex);
      added.push_back(next++);
    }
  }
  res.contracted = gp;
  SurfaceEmbedding host = embed(gp);
  auto ver = verify_embedding(gp, host.rot);
  if (!ver.ok) throw EmbeddingError("contract_then_expand: embedder returned an invalid embedding: " + ver.diagnostic);
  host.graph = gp;
  res.contracted_genus = ver.euler_genus;

  for (const Extremity& c : ext) {
    EdgeId base = std::max(next, host.graph.max_edge_id() + 1);
    if (c.apex && !apex_neighbours(inst, c).empty()) {
      VertexId x = *c.apex;
      EdgeId aux = base;
      SurfaceEmbedding piece = *planar_embed(with_apex(inst, c, x, aux)).embedding;
      // a parallel twin of the portal-apex edge bounds a digon, so it has
      // two distinct faces and the 2-sum adds nothing
      auto ins = insert_edge_best(host, c.portal, x, aux + 1);
      if (ins.delta != 0) throw EmbeddingError("contract_then_expand: portal and apex are not co-facial");
      // the piece keeps the apex edges; drop them from it if the host has them
      for (EdgeId e : piece.graph.edges())
        if (e != aux && host.graph.has_edge(e)) delete_edge(piece, e);
      host = two_sum(host, ins.edge, piece, aux);
    } else {
      // amalgamate a planar drawing of C at the portal, inside one corner
      SurfaceEmbedding piece = *planar_embed(edge_subgraph(inst.planar_piece, c.edges)).embedding;
      for (VertexId w : piece.graph.vertices())
        if (w != c.portal) host.graph.add_vertex(w);
      for (auto& [id, e] : piece.graph.edge_map()) {
        host.graph.add_edge(id, e.u, e.v);
        host.rot.signature[id] = piece.rot.sign(id);
      }
      for (auto& [w, r] : piece.rot.rotation)
        if (w != c.portal) host.rot.rotation[w] = r;
      auto& hr = host.rot.rotation[c.portal];
      const auto& pr = piece.rot.rotation.at(c.portal);
      hr.insert(hr.empty() ? hr.end() : hr.begin() + 1, pr.begin(), pr.end());
    }
  }
  for (EdgeId e : added) delete_edge(host, e);

  if (host.graph.num_edges() != inst.graph.num_edges() || host.graph.num_vertices() != inst.graph.num_vertices())
    throw EmbeddingError("contract_then_expand: result is not G");
  for (auto& [id, e] : inst.graph.edge_map())
    if (!host.graph.has_edge(id) || std::minmax(host.graph.edge(id).u, host.graph.edge(id).v) != std::minmax(e.u, e.v))
      throw EmbeddingError("contract_then_expand: edge " + std::to_string(id) + " lost");
  // dart ends follow the stored orientation, which may differ from G's
  for (auto& [id, e] : inst.graph.edge_map())
    if (host.graph.edge(id).u != e.u) {
      for (auto& [v, r] : host.rot.rotation)
        for (Dart& d : r)
          if (dart_edge(d) == id) d = twin(d);
    }
  host.graph = inst.graph;
  res.genus = host.euler_genus();
  res.embedding = std::move(host);
  return res;
}

long extremity_number_bound(long m, long seq_len, long x_count) { return m + 2 * seq_len * x_count; }

}  // namespace genuskit
