#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

#include "embed_internal.hpp"
#include "genuskit/face_cover.hpp"
#include "genuskit/planar.hpp"
#include "genuskit/surgery.hpp"

namespace genuskit {

int ledger_sum(const EmbedResult& r) {
  int s = 0;
  for (auto& e : r.ledger) s += e.genus_added;
  return s;
}

namespace detail {

void push(EmbedResult& r, std::string step, int delta, std::string source) {
  r.ledger.push_back({std::move(step), delta, std::move(source)});
}

void absorb(EmbedResult& r, const EmbedResult& child, const std::string& prefix) {
  for (auto& e : child.ledger) r.ledger.push_back({prefix + e.step, e.genus_added, e.source});
  for (auto& [k, v] : child.stats) r.stats[k] += v;
}

int add_missing(SurfaceEmbedding& emb, const Graph& g) {
  int g0 = emb.euler_genus();
  for (VertexId v : g.vertices())
    if (!emb.graph.has_vertex(v)) {
      emb.graph.add_vertex(v);
      emb.rot.rotation[v];
    }
  for (auto& [id, e] : g.edge_map())
    if (!emb.graph.has_edge(id)) insert_edge_best(emb, e.u, e.v, id);
  return emb.euler_genus() - g0;
}

EmbedResult finish(EmbedResult r, const Graph& g, const std::string& who) {
  const Graph& mine = r.embedding.graph;
  if (mine.num_vertices() != g.num_vertices() || mine.num_edges() != g.num_edges())
    throw std::logic_error(who + ": embedding does not cover the input graph");
  for (auto& [id, e] : g.edge_map()) {
    if (!mine.has_edge(id)) throw std::logic_error(who + ": edge " + std::to_string(id) + " missing");
    const Edge& f = mine.edge(id);
    if (f.u != e.u || f.v != e.v) throw std::logic_error(who + ": edge " + std::to_string(id) + " reversed");
  }
  VerifyResult ver = verify_embedding(g, r.embedding.rot);
  if (!ver.ok) throw std::logic_error(who + ": " + ver.diagnostic);
  r.embedding.graph = g;
  r.genus = ver.euler_genus;
  if (ledger_sum(r) != r.genus)
    throw std::logic_error(who + ": ledger sums to " + std::to_string(ledger_sum(r)) + " but genus is " +
                           std::to_string(r.genus));
  return r;
}

EmbedResult embed_split(const ApexInstance& inst, const SplittingSequence& seq, const InstanceEmbedder& fn,
                        const std::string& label) {
  SplitResult sr = apply_sequence(inst, seq);
  EmbedResult out;
  std::vector<SurfaceEmbedding> psi;
  int child_sum = 0;
  for (std::size_t i = 0; i < sr.fragments.size(); ++i) {
    ApexInstance fi = ApexInstance::make(fragment_graph(sr, i), sr.instance.apices);
    EmbedResult r = fn(fi);
    child_sum += r.genus;
    absorb(out, r, label + " fragment " + std::to_string(i) + ": ");
    psi.push_back(std::move(r.embedding));
  }
  GlueResult gr = glue_fragmented(inst, seq, psi);
  push(out, label + ": join apex copies", gr.join_cost, "fragment gluing");
  push(out, label + ": merge split copies", gr.undo_cost, "fragment gluing");
  push(out, label + ": restore dropped apex edges", gr.restore_cost, "fragment gluing");
  int residual = gr.genus - child_sum - gr.join_cost - gr.undo_cost - gr.restore_cost;
  if (residual != 0) push(out, label + ": duplicate apex-apex edges dropped", residual, "fragment gluing");
  out.embedding = std::move(gr.embedding);
  out.stats["splittings"] += static_cast<long>(seq.steps.size());
  out.stats["fragments"] += static_cast<long>(sr.fragments.size());
  return out;
}

std::vector<std::vector<EdgeId>> block_classes(const Graph& h, VertexId v) {
  BlockCutTree b = biconnected_decompose(h);
  std::map<EdgeId, std::size_t> owner;
  for (std::size_t i = 0; i < b.blocks.size(); ++i)
    for (EdgeId e : b.blocks[i]) owner[e] = i;
  std::map<std::size_t, std::vector<EdgeId>> by;
  EdgeSet seen;
  for (EdgeId e : h.incident(v))
    if (seen.insert(e).second) by[owner.at(e)].push_back(e);
  std::vector<std::vector<EdgeId>> out;
  for (auto& [i, es] : by) out.push_back(es);
  return out;
}

SplittingSequence split_into_classes(const ApexInstance& inst,
                                     const std::map<VertexId, std::vector<std::vector<EdgeId>>>& at,
                                     std::size_t& fallbacks) {
  SplittingSequence seq;
  for (auto& [v, classes] : at) {
    if (classes.size() < 2) continue;
    std::vector<Splitting> steps;
    try {
      steps = realize_partition(inst, v, classes);
    } catch (const GraphError&) {
      ++fallbacks;
      steps = realize_partition(inst, v, block_classes(inst.planar_piece, v));
    }
    seq.steps.insert(seq.steps.end(), steps.begin(), steps.end());
  }
  return seq;
}

EmbedResult or_fallback(const ApexInstance& inst, const InstanceEmbedder& fn, const std::string& what) {
  try {
    return fn(inst);
  } catch (const GraphError&) {
    EmbedResult r = embed_by_insertion(inst);
    for (auto& e : r.ledger) e.step = "fallback for " + what + ": " + e.step;
    r.stats["fallbacks"] += 1;
    return r;
  }
}

VertexSet active_apices(const ApexInstance& inst) {
  auto vs = inst.planar_piece.vertices();
  return apex_neighbours(inst, VertexSet(vs.begin(), vs.end()));
}

}  // namespace detail

using namespace detail;

namespace {

std::optional<Corner> corner_on(const SurfaceEmbedding& e, const FaceData& fd, VertexId v, int f) {
  for (const Corner& c : corners_at(e, v))
    if (face_of_corner(fd, c) == f) return c;
  return std::nullopt;
}

// keeps g's orientation of the edge: the corner of edge.u goes first
void place(SurfaceEmbedding& emb, const Graph& g, EdgeId id, const Corner& a, const Corner& b) {
  if (g.edge(id).u == a.v)
    insert_edge_at(emb, a, b, 1, id);
  else
    insert_edge_at(emb, b, a, 1, id);
}

void best(SurfaceEmbedding& emb, const Graph& g, EdgeId id) {
  insert_edge_best(emb, g.edge(id).u, g.edge(id).v, id);
}

// a face is located by one of its flags, or by its isolated vertex (-1 - v)
std::int64_t anchor_of(const FaceWalk& w) { return w.isolated >= 0 ? -1 - w.isolated : w.flags.front(); }

int locate(const FaceData& fd, std::int64_t anchor) {
  return anchor >= 0 ? fd.flag_face.at(anchor) : fd.isolated_face.at(-1 - anchor);
}

// Draws x's edges `es` into the face holding `anchor`: the first edge from
// wherever x sits (a handle when that is another face of the same surface
// piece), the rest by cheapest insertion.
void route_group(SurfaceEmbedding& emb, const Graph& g, VertexId x, const std::vector<EdgeId>& es,
                 std::int64_t anchor) {
  if (es.empty()) return;
  if (!emb.graph.has_vertex(x)) {
    emb.graph.add_vertex(x);
    emb.rot.rotation[x];
  }
  FaceData fd = emb.faces();
  int f = locate(fd, anchor);
  auto cv = corner_on(emb, fd, g.other(es[0], x), f);
  auto cx = corner_on(emb, fd, x, f);
  if (!cx) cx = corners_at(emb, x).front();
  if (cv)
    place(emb, g, es[0], *cx, *cv);
  else
    best(emb, g, es[0]);
  for (std::size_t j = 1; j < es.size(); ++j) best(emb, g, es[j]);
}

}  // namespace

ApexInsertion insert_apex_by_cover(SurfaceEmbedding& emb, const Graph& g, VertexId x, bool home_outside) {
  if (!g.has_vertex(x)) throw GraphError("insert_apex_by_cover: unknown vertex " + std::to_string(x));
  if (emb.graph.has_vertex(x)) throw GraphError("insert_apex_by_cover: vertex " + std::to_string(x) + " already drawn");
  ApexInsertion res;
  int g0 = emb.euler_genus();

  std::map<VertexId, std::vector<EdgeId>> to;
  std::set<EdgeId> loops;
  for (EdgeId id : g.incident(x)) {
    VertexId o = g.other(id, x);
    if (o == x)
      loops.insert(id);
    else if (emb.graph.has_vertex(o))
      to[o].push_back(id);
  }
  VertexSet nb;
  for (auto& [v, ids] : to) nb.insert(v);
  FaceCover cov = min_face_cover(emb, nb);
  FaceData fd = emb.faces();
  res.cover = cov.faces.size();
  std::set<int> in_cover(cov.faces.begin(), cov.faces.end());

  std::vector<std::int64_t> anchor;
  std::vector<VertexSet> on;
  for (int f : cov.faces) {
    anchor.push_back(anchor_of(fd.faces[f]));
    on.push_back(face_vertices(fd.faces[f]));
  }

  // x may sit in a face h outside the cover, joined there to a neighbour w
  // on cover face i, provided face i keeps another edge for its handle. In
  // a minimum cover every face has a private neighbour, so all shared
  // neighbours on face i can be handed to i without emptying another group.
  std::optional<std::size_t> home_face;
  EdgeId home_edge = -1;
  Corner home_corner;
  if (home_outside) {
    for (std::size_t i = 0; i < on.size() && !home_face; ++i) {
      std::size_t cnt = 0;
      for (auto& [v, ids] : to)
        if (on[i].count(v)) cnt += ids.size();
      if (cnt < 2) continue;
      for (auto it = to.begin(); it != to.end() && !home_face; ++it) {
        if (!on[i].count(it->first)) continue;
        for (const Corner& c : corners_at(emb, it->first)) {
          if (c.after < 0 || in_cover.count(face_of_corner(fd, c))) continue;
          home_face = i;
          home_edge = it->second.front();
          home_corner = c;
          break;
        }
      }
    }
  }

  std::vector<std::vector<EdgeId>> group(cov.faces.size());
  for (auto& [v, ids] : to) {
    std::size_t owner = on.size();
    if (home_face && on[*home_face].count(v)) owner = *home_face;
    for (std::size_t i = 0; i < on.size() && owner == on.size(); ++i)
      if (on[i].count(v)) owner = i;
    for (EdgeId id : ids)
      if (id != home_edge) group[owner].push_back(id);
  }

  emb.graph.add_vertex(x);
  emb.rot.rotation[x];
  if (home_face) {
    place(emb, g, home_edge, Corner{x, -1}, home_corner);
    res.home_outside = true;
  }
  for (std::size_t i = 0; i < group.size(); ++i) route_group(emb, g, x, group[i], anchor[i]);
  for (EdgeId id : loops) best(emb, g, id);
  res.delta = emb.euler_genus() - g0;
  return res;
}

EmbedResult embed_1apex(const Graph& g, VertexId a, bool tight) {
  if (!g.has_vertex(a)) throw GraphError("embed_1apex: unknown apex " + std::to_string(a));
  Graph h = remove_vertices(g, {a});
  if (!is_planar(h)) throw GraphError("embed_1apex: G - a is not planar");
  auto nv = g.neighbors(a);
  VertexSet nb(nv.begin(), nv.end());
  EmbedResult r;
  if (nb.empty()) {
    r.embedding = *planar_embed(h).embedding;
  } else {
    CoverOverEmbeddings ce = min_face_cover_over_embeddings(h, nb);
    r.embedding = ce.embedding;
    r.stats["cover_exact"] = ce.exact;
  }
  push(r, "planar drawing of G - a", 0, "planar embedding");
  ApexInsertion ins = insert_apex_by_cover(r.embedding, g, a, !tight);
  push(r, "apex through one handle per cover face", ins.delta, "1-apex face cover");
  r.stats["cover"] = static_cast<long>(ins.cover);
  r.stats["home_outside"] = ins.home_outside;
  return finish(std::move(r), g, "embed_1apex");
}

EmbedResult embed_by_insertion(const ApexInstance& inst) {
  EmbedResult r;
  r.embedding = inst.stored_drawing();
  push(r, "planar drawing of H", 0, "planar embedding");
  for (VertexId x : inst.apices) {
    ApexInsertion ins = insert_apex_by_cover(r.embedding, inst.graph, x, false);
    push(r, "insert apex " + std::to_string(x), ins.delta, "vertex insertion by face cover");
    r.stats["cover"] += static_cast<long>(ins.cover);
  }
  return finish(std::move(r), inst.graph, "embed_by_insertion");
}

EmbedResult embed_centipedes(const ApexInstance& inst, const SurfaceEmbedding& drawing,
                             const std::vector<Piece>& pieces) {
  EdgeSet used;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (p.kind != Piece::Kind::Centipede) continue;
    Verdict v = is_centipede(inst, drawing, p.face, p.centipede);
    if (!v) throw GraphError("embed_centipedes: piece " + std::to_string(i) + ": " + v.why);
    for (EdgeId e : p.centipede.edges)
      if (!used.insert(e).second)
        throw GraphError("embed_centipedes: apex edge " + std::to_string(e) + " in two pieces");
  }
  EmbedResult r;
  r.embedding = drawing;
  push(r, "planar drawing of H", 0, "planar embedding");
  FaceData fd0 = drawing.faces();
  long count = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (p.kind != Piece::Kind::Centipede) continue;
    int before = r.embedding.euler_genus();
    std::int64_t anchor = anchor_of(fd0.faces.at(p.face));
    for (VertexId x : {p.centipede.x1, p.centipede.x2}) {
      if (x < 0) continue;
      std::vector<EdgeId> es;
      for (EdgeId e : p.centipede.edges)
        if (inst.graph.edge(e).u == x || inst.graph.edge(e).v == x) es.push_back(e);
      route_group(r.embedding, inst.graph, x, es, anchor);
    }
    push(r, "centipede " + std::to_string(i), r.embedding.euler_genus() - before, "centipede embedding");
    ++count;
  }
  int rest = add_missing(r.embedding, inst.graph);
  push(r, "edges outside the centipedes", rest, "edge insertion");
  r.stats["centipedes"] += count;
  return finish(std::move(r), inst.graph, "embed_centipedes");
}

EmbedResult embed_2connected_kapex(const ApexInstance& inst) {
  if (!is_biconnected(inst.planar_piece)) throw GraphError("embed_2connected_kapex: H is not 2-connected");
  if (active_apices(inst).empty()) {
    EmbedResult r;
    r.embedding = inst.stored_drawing();
    push(r, "planar drawing of H", 0, "planar embedding");
    push(r, "apices and apex-apex edges", add_missing(r.embedding, inst.graph), "edge insertion");
    return finish(std::move(r), inst.graph, "embed_2connected_kapex");
  }
  DecompositionReport rep = centipede_butterfly(inst);
  EmbedResult r = embed_centipedes(inst, rep.drawing, rep.pieces);
  r.stats["butterflies"] += rep.counts["butterflies"];
  return r;
}

EmbedResult embed_2apex(const ApexInstance& inst) {
  VertexSet act = active_apices(inst);
  if (act.size() > 2) throw GraphError("embed_2apex: " + std::to_string(act.size()) + " apices see H");
  if (inst.planar_piece.num_vertices() == 0 || is_planar(inst.graph)) {
    EmbedResult r;
    r.embedding = *planar_embed(inst.graph).embedding;
    push(r, "G is planar", 0, "planar embedding");
    return finish(std::move(r), inst.graph, "embed_2apex");
  }
  if (act.size() < inst.apices.size()) {
    VertexSet idle;
    for (VertexId x : inst.apices)
      if (!act.count(x)) idle.insert(x);
    EmbedResult r = embed_2apex(ApexInstance::make(remove_vertices(inst.graph, idle), act));
    push(r, "apices without neighbours in H", add_missing(r.embedding, inst.graph), "edge insertion");
    return finish(std::move(r), inst.graph, "embed_2apex");
  }
  if (act.size() == 1) return embed_1apex(inst.graph, *act.begin(), true);
  if (is_biconnected(inst.planar_piece)) return embed_2connected_kapex(inst);

  BlockCutTree b = biconnected_decompose(inst.planar_piece);
  std::map<VertexId, std::vector<std::vector<EdgeId>>> at;
  for (VertexId c : b.cut_vertices) at[c] = block_classes(inst.planar_piece, c);
  std::size_t fb = 0;
  SplittingSequence seq = split_into_classes(inst, at, fb);
  EmbedResult r = embed_split(inst, seq, [](const ApexInstance& f) { return embed_2apex(f); }, "block");
  return finish(std::move(r), inst.graph, "embed_2apex");
}

}  // namespace genuskit
