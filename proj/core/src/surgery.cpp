#include "genuskit/surgery.hpp"

#include <algorithm>

namespace genuskit {

namespace {

Dart pred_in(const std::vector<Dart>& rot, Dart d) {
  auto it = std::find(rot.begin(), rot.end(), d);
  if (it == rot.end()) throw EmbeddingError("dart not in rotation");
  return it == rot.begin() ? rot.back() : *(it - 1);
}

// corner of the walk step that starts at flag f
Corner corner_of_flag(const SurfaceEmbedding& e, std::int64_t f) {
  Dart d = f >> 1;
  VertexId v = dart_vertex(e.graph, d);
  if (f & 1) return {v, d};
  return {v, pred_in(e.rot.rotation.at(v), d)};
}

void insert_after(std::vector<Dart>& rot, Dart after, Dart d) {
  if (after < 0) {
    if (!rot.empty()) throw EmbeddingError("corner without anchor at non-isolated vertex");
    rot.push_back(d);
    return;
  }
  auto it = std::find(rot.begin(), rot.end(), after);
  if (it == rot.end()) throw EmbeddingError("corner anchor not in rotation");
  rot.insert(it + 1, d);
}

EdgeId fresh_edge_id(const Graph& g) { return std::max(g.next_edge_id(), g.max_edge_id() + 1); }

bool same_component(const Graph& g, VertexId a, VertexId b) {
  VertexSet all;
  for (VertexId v : g.vertices()) all.insert(v);
  return reach_within(g, a, all).count(b) > 0;
}

}  // namespace

std::vector<Corner> corners_at(const SurfaceEmbedding& e, VertexId v) {
  std::vector<Corner> out;
  auto it = e.rot.rotation.find(v);
  if (it == e.rot.rotation.end() || it->second.empty()) {
    out.push_back({v, -1});
    return out;
  }
  for (Dart d : it->second) out.push_back({v, d});
  return out;
}

int face_of_corner(const FaceData& fd, const Corner& c) {
  if (c.after < 0) return fd.isolated_face.at(c.v);
  return fd.flag_face.at(2 * c.after + 1);
}

EdgeId insert_edge_at(SurfaceEmbedding& e, Corner cu, Corner cv, int sign, EdgeId id) {
  if (id < 0) id = fresh_edge_id(e.graph);
  e.graph.add_edge(id, cu.v, cv.v);
  insert_after(e.rot.rotation[cu.v], cu.after, make_dart(id, 0));
  insert_after(e.rot.rotation[cv.v], cv.after, make_dart(id, 1));
  e.rot.signature[id] = sign;
  return id;
}

Insertion insert_edge_best(SurfaceEmbedding& e, VertexId u, VertexId v, EdgeId id) {
  if (id < 0) id = fresh_edge_id(e.graph);
  Insertion res;
  res.edge = id;
  int g0 = e.euler_genus();
  auto cu = corners_at(e, u);

  if (u == v) {
    // loops: brute force over both corner choices and signs
    int best = -1;
    SurfaceEmbedding best_e;
    for (auto& a : cu) {
      SurfaceEmbedding t0 = e;
      t0.graph.add_edge(id, u, u);
      insert_after(t0.rot.rotation[u], a.after, make_dart(id, 0));
      for (Dart anchor : t0.rot.rotation[u]) {
        for (int s : {1, -1}) {
          SurfaceEmbedding t = t0;
          insert_after(t.rot.rotation[u], anchor, make_dart(id, 1));
          t.rot.signature[id] = s;
          int d = t.euler_genus() - g0;
          if (best < 0 || d < best) {
            best = d;
            best_e = t;
          }
          if (best == 0) break;
        }
        if (best == 0) break;
      }
      if (best == 0) break;
    }
    e = best_e;
    res.delta = best;
    return res;
  }

  auto cv = corners_at(e, v);
  if (!same_component(e.graph, u, v)) {
    insert_edge_at(e, cu.front(), cv.front(), 1, id);
    res.delta = 0;
    return res;
  }
  FaceData fd = e.faces();
  // co-facial corners first; one of the two signs splits the face
  for (auto& a : cu) {
    int fa = face_of_corner(fd, a);
    for (auto& b : cv) {
      if (face_of_corner(fd, b) != fa) continue;
      int best = 3;
      SurfaceEmbedding best_e;
      for (int s : {1, -1}) {
        SurfaceEmbedding t = e;
        insert_edge_at(t, a, b, s, id);
        int d = t.euler_genus() - g0;
        if (d < best) {
          best = d;
          best_e = std::move(t);
        }
        if (best == 0) break;
      }
      e = std::move(best_e);
      res.delta = best;
      return res;
    }
  }
  insert_edge_at(e, cu.front(), cv.front(), 1, id);
  res.delta = e.euler_genus() - g0;
  return res;
}

void delete_edge(SurfaceEmbedding& e, EdgeId id) {
  const Edge ed = e.graph.edge(id);
  for (VertexId w : {ed.u, ed.v}) {
    auto& rot = e.rot.rotation[w];
    rot.erase(std::remove_if(rot.begin(), rot.end(), [&](Dart d) { return dart_edge(d) == id; }),
              rot.end());
  }
  e.rot.signature.erase(id);
  e.graph.remove_edge(id);
}

void delete_vertex(SurfaceEmbedding& e, VertexId v) {
  std::vector<EdgeId> inc = e.graph.incident(v);
  std::sort(inc.begin(), inc.end());
  inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
  for (EdgeId id : inc) delete_edge(e, id);
  e.rot.rotation.erase(v);
  e.graph.remove_vertex(v);
}

void contract_edge(SurfaceEmbedding& e, EdgeId id, VertexId keep) {
  const Edge ed = e.graph.edge(id);
  if (ed.is_loop()) throw EmbeddingError("contract_edge: loop");
  if (ed.u != keep && ed.v != keep) throw EmbeddingError("contract_edge: keep not an endpoint");
  VertexId w = ed.u == keep ? ed.v : ed.u;
  if (e.rot.sign(id) < 0) flip_vertex(e, w);
  Dart dk = make_dart(id, ed.u == keep ? 0 : 1);
  Dart dw = twin(dk);
  std::vector<Dart> rw = e.rot.rotation.at(w);
  auto pw = std::find(rw.begin(), rw.end(), dw);
  std::vector<Dart> seq(pw + 1, rw.end());
  seq.insert(seq.end(), rw.begin(), pw);
  auto& rk = e.rot.rotation.at(keep);
  auto pk = std::find(rk.begin(), rk.end(), dk);
  std::size_t at = static_cast<std::size_t>(pk - rk.begin());
  rk.erase(pk);
  rk.insert(rk.begin() + static_cast<long>(at), seq.begin(), seq.end());

  e.graph.remove_edge(id);
  e.rot.signature.erase(id);
  std::vector<EdgeId> inc = e.graph.incident(w);
  std::sort(inc.begin(), inc.end());
  inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
  for (EdgeId f : inc) {
    Edge fe = e.graph.edge(f);
    e.graph.remove_edge(f);
    e.graph.add_edge(f, fe.u == w ? keep : fe.u, fe.v == w ? keep : fe.v);
  }
  e.rot.rotation.erase(w);
  e.graph.remove_vertex(w);
}

int identify_vertices(SurfaceEmbedding& e, VertexId a, VertexId b) {
  if (a == b) return 0;
  Insertion ins = insert_edge_best(e, a, b);
  contract_edge(e, ins.edge, a);
  return ins.delta;
}

SurfaceEmbedding disjoint_union(const SurfaceEmbedding& a, const SurfaceEmbedding& b) {
  SurfaceEmbedding out = a;
  for (VertexId v : b.graph.vertices()) {
    if (out.graph.has_vertex(v)) throw EmbeddingError("disjoint_union: shared vertex " + std::to_string(v));
    out.graph.add_vertex(v);
    if (auto l = b.graph.label(v)) out.graph.set_label(v, *l);
  }
  for (auto& [id, ed] : b.graph.edge_map()) {
    if (out.graph.has_edge(id)) throw EmbeddingError("disjoint_union: shared edge " + std::to_string(id));
    out.graph.add_edge(id, ed.u, ed.v);
    out.rot.signature[id] = b.rot.sign(id);
  }
  for (auto& [v, r] : b.rot.rotation) out.rot.rotation[v] = r;
  return out;
}

SurfaceEmbedding two_sum(const SurfaceEmbedding& host, EdgeId e_host, const SurfaceEmbedding& piece,
                         EdgeId e_piece) {
  SurfaceEmbedding H = host, P = piece;
  const Edge eh = H.graph.edge(e_host);
  const Edge ep = P.graph.edge(e_piece);
  if (eh.is_loop()) throw EmbeddingError("two_sum: loop");
  VertexId a = eh.u, b = eh.v;
  if (std::minmax(ep.u, ep.v) != std::minmax(a, b))
    throw EmbeddingError("two_sum: virtual edges have different endpoints");
  if (H.rot.sign(e_host) < 0) flip_vertex(H, b);
  if (P.rot.sign(e_piece) < 0) flip_vertex(P, b);

  auto after = [](const std::vector<Dart>& rot, Dart d) {
    auto p = std::find(rot.begin(), rot.end(), d);
    std::vector<Dart> seq(p + 1, rot.end());
    seq.insert(seq.end(), rot.begin(), p);
    return seq;
  };
  auto splice = [](std::vector<Dart>& rot, Dart d, const std::vector<Dart>& seq) {
    auto p = std::find(rot.begin(), rot.end(), d);
    std::size_t at = static_cast<std::size_t>(p - rot.begin());
    rot.erase(p);
    rot.insert(rot.begin() + static_cast<long>(at), seq.begin(), seq.end());
  };
  Dart ha = make_dart(e_host, 0), hb = make_dart(e_host, 1);
  Dart pa = make_dart(e_piece, ep.u == a ? 0 : 1), pb = twin(pa);
  std::vector<Dart> sa = after(P.rot.rotation.at(a), pa);
  std::vector<Dart> sb = after(P.rot.rotation.at(b), pb);

  SurfaceEmbedding out;
  out.graph = H.graph;
  out.graph.remove_edge(e_host);
  out.rot = H.rot;
  out.rot.signature.erase(e_host);
  splice(out.rot.rotation.at(a), ha, sa);
  splice(out.rot.rotation.at(b), hb, sb);
  for (VertexId v : P.graph.vertices()) {
    if (v == a || v == b) continue;
    if (out.graph.has_vertex(v)) throw EmbeddingError("two_sum: shared vertex " + std::to_string(v));
    out.graph.add_vertex(v);
    out.rot.rotation[v] = P.rot.rotation.at(v);
  }
  for (auto& [id, ed] : P.graph.edge_map()) {
    if (id == e_piece) continue;
    if (out.graph.has_edge(id)) throw EmbeddingError("two_sum: shared edge " + std::to_string(id));
    out.graph.add_edge(id, ed.u, ed.v);
    out.rot.signature[id] = P.rot.sign(id);
  }
  return out;
}

namespace {

Corner corner_on_face(const SurfaceEmbedding& e, const FaceData& fd, int f, VertexId v) {
  const FaceWalk& w = fd.faces.at(static_cast<std::size_t>(f));
  if (w.isolated >= 0) {
    if (w.isolated == v) return {v, -1};
  } else {
    for (std::size_t i = 0; i < w.length(); ++i)
      if (w.vertices[i] == v) return corner_of_flag(e, w.flags[i]);
  }
  throw EmbeddingError("edge endpoint " + std::to_string(v) + " not on face " + std::to_string(f));
}

}  // namespace

SurgeryResult add_handle_for_edges(const SurfaceEmbedding& e, const std::vector<RoutedEdge>& edges,
                                   int f1, int f2) {
  SurgeryResult r;
  r.emb = e;
  if (edges.empty()) return r;
  FaceData fd = e.faces();
  int nf = static_cast<int>(fd.faces.size());
  if (f1 < 0 || f2 < 0 || f1 >= nf || f2 >= nf || f1 == f2)
    throw EmbeddingError("add_handle_for_edges: bad face pair");
  for (auto& re : edges) {
    corner_on_face(e, fd, f1, re.u);
    corner_on_face(e, fd, f2, re.v);
  }
  int g0 = e.euler_genus();
  Corner cu = corner_on_face(e, fd, f1, edges[0].u);
  Corner cv = corner_on_face(e, fd, f2, edges[0].v);
  r.edges.push_back(insert_edge_at(r.emb, cu, cv, 1, edges[0].id));
  for (std::size_t i = 1; i < edges.size(); ++i)
    r.edges.push_back(insert_edge_best(r.emb, edges[i].u, edges[i].v, edges[i].id).edge);
  r.delta = r.emb.euler_genus() - g0;
  return r;
}

SurgeryResult add_cylinder(const SurfaceEmbedding& a, const SurfaceEmbedding& b, int f1, int f2,
                           const std::vector<RoutedEdge>& crossing) {
  SurgeryResult r;
  FaceData fa = a.faces(), fb = b.faces();
  if (f1 < 0 || f1 >= static_cast<int>(fa.faces.size()) || f2 < 0 ||
      f2 >= static_cast<int>(fb.faces.size()))
    throw EmbeddingError("add_cylinder: attachment face id invalid");
  int g0 = a.euler_genus() + b.euler_genus();
  r.emb = disjoint_union(a, b);
  if (crossing.empty()) return r;
  for (auto& c : crossing) {
    if (!a.graph.has_vertex(c.u) || !b.graph.has_vertex(c.v))
      throw EmbeddingError("add_cylinder: crossing edge does not join the two sides");
  }
  Corner cu = corner_on_face(a, fa, f1, crossing[0].u);
  Corner cv = corner_on_face(b, fb, f2, crossing[0].v);
  r.edges.push_back(insert_edge_at(r.emb, cu, cv, 1, crossing[0].id));
  for (std::size_t i = 1; i < crossing.size(); ++i)
    r.edges.push_back(insert_edge_best(r.emb, crossing[i].u, crossing[i].v, crossing[i].id).edge);
  r.delta = r.emb.euler_genus() - g0;
  return r;
}

}  // namespace genuskit
