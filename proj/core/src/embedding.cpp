#include "genuskit/embedding.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace genuskit {

VertexId dart_vertex(const Graph& g, Dart d) {
  const Edge& e = g.edge(dart_edge(d));
  return dart_end(d) == 0 ? e.u : e.v;
}

bool RotationSystem::operator==(const RotationSystem& o) const {
  if (rotation != o.rotation) return false;
  std::set<EdgeId> keys;
  for (auto& [e, s] : signature) keys.insert(e);
  for (auto& [e, s] : o.signature) keys.insert(e);
  for (EdgeId e : keys)
    if (sign(e) != o.sign(e)) return false;
  return true;
}

std::vector<Dart> darts_at(const Graph& g, VertexId v) {
  std::vector<Dart> out;
  std::set<EdgeId> seen;
  for (EdgeId e : g.incident(v)) {
    if (!seen.insert(e).second) continue;
    const Edge& ed = g.edge(e);
    if (ed.u == v) out.push_back(make_dart(e, 0));
    if (ed.v == v) out.push_back(make_dart(e, 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

RotationSystem default_rotation(const Graph& g) {
  RotationSystem r;
  for (VertexId v : g.vertices()) r.rotation[v] = darts_at(g, v);
  for (EdgeId e : g.edges()) r.signature[e] = 1;
  return r;
}

namespace {

struct Perm {
  std::unordered_map<Dart, Dart> succ, pred;
};

// Returns an empty string when r is a valid rotation system for g.
std::string check_rotation(const Graph& g, const RotationSystem& r) {
  std::set<Dart> seen;
  for (auto& [v, rot] : r.rotation) {
    if (!g.has_vertex(v)) return "unknown vertex " + std::to_string(v);
    for (Dart d : rot) {
      EdgeId e = dart_edge(d);
      if (d < 0 || !g.has_edge(e)) return "unknown edge " + std::to_string(e);
      if (dart_vertex(g, d) != v)
        return "wrong vertex: end of edge " + std::to_string(e) + " listed at " + std::to_string(v);
      if (!seen.insert(d).second) return "duplicate end of edge " + std::to_string(e);
    }
  }
  for (EdgeId e : g.edges())
    for (int end = 0; end < 2; ++end)
      if (!seen.count(make_dart(e, end)))
        return "missing end " + std::to_string(end) + " of edge " + std::to_string(e);
  for (auto& [e, s] : r.signature) {
    if (!g.has_edge(e)) return "unknown edge " + std::to_string(e) + " in signature";
    if (s != 1 && s != -1) return "bad signature on edge " + std::to_string(e);
  }
  return {};
}

Perm build_perm(const RotationSystem& r) {
  Perm p;
  for (auto& [v, rot] : r.rotation) {
    std::size_t k = rot.size();
    for (std::size_t i = 0; i < k; ++i) {
      p.succ[rot[i]] = rot[(i + 1) % k];
      p.pred[rot[(i + 1) % k]] = rot[i];
    }
  }
  return p;
}

}  // namespace

FaceData trace_faces(const Graph& g, const RotationSystem& r) {
  std::string err = check_rotation(g, r);
  if (!err.empty()) throw EmbeddingError(err);
  Perm p = build_perm(r);
  FaceData fd;
  std::unordered_map<std::int64_t, char> visited;
  auto alpha = [&](std::int64_t f) -> std::int64_t {
    Dart d = f >> 1;
    return (f & 1) ? 2 * p.succ.at(d) : 2 * p.pred.at(d) + 1;
  };
  auto beta = [&](std::int64_t f) -> std::int64_t {
    Dart d = f >> 1;
    int s = static_cast<int>(f & 1);
    int t = r.sign(dart_edge(d)) > 0 ? (s ^ 1) : s;
    return 2 * twin(d) + t;
  };
  for (EdgeId e : g.edges()) {
    for (std::int64_t f = 4 * e; f < 4 * e + 4; ++f) {
      if (visited.count(f)) continue;
      FaceWalk w;
      int id = static_cast<int>(fd.faces.size());
      std::int64_t cur = f;
      do {
        Dart d = cur >> 1;
        w.darts.push_back(d);
        w.vertices.push_back(dart_vertex(g, d));
        w.flags.push_back(cur);
        visited[cur] = 1;
        fd.flag_face[cur] = id;
        std::int64_t b = beta(cur);
        visited[b] = 1;
        fd.flag_face[b] = id;
        cur = alpha(b);
      } while (cur != f);
      fd.faces.push_back(std::move(w));
    }
  }
  for (VertexId v : g.vertices()) {
    if (g.degree(v) != 0) continue;
    FaceWalk w;
    w.isolated = v;
    fd.isolated_face[v] = static_cast<int>(fd.faces.size());
    fd.faces.push_back(std::move(w));
  }
  return fd;
}

bool is_orientable(const Graph& g, const RotationSystem& r) {
  std::map<VertexId, int> o;
  for (VertexId s : g.vertices()) {
    if (o.count(s)) continue;
    o[s] = 1;
    std::deque<VertexId> q{s};
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      for (EdgeId e : g.incident(x)) {
        VertexId y = g.other(e, x);
        int sg = r.sign(e);
        if (y == x) {
          if (sg < 0) return false;
          continue;
        }
        auto it = o.find(y);
        if (it == o.end()) {
          o[y] = o[x] * sg;
          q.push_back(y);
        } else if (it->second != o[x] * sg) {
          return false;
        }
      }
    }
  }
  return true;
}

GenusReport SurfaceEmbedding::genus_report() const {
  GenusReport rep;
  FaceData fd = trace_faces(graph, rot);
  auto comps = connected_components(graph);
  std::map<VertexId, int> comp_of;
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (VertexId v : comps[i]) comp_of[v] = static_cast<int>(i);
  std::vector<long> V(comps.size(), 0), E(comps.size(), 0), F(comps.size(), 0);
  for (std::size_t i = 0; i < comps.size(); ++i) V[i] = static_cast<long>(comps[i].size());
  for (auto& [id, ed] : graph.edge_map()) ++E[comp_of[ed.u]];
  for (auto& f : fd.faces) {
    VertexId v = f.isolated >= 0 ? f.isolated : f.vertices.front();
    ++F[comp_of[v]];
  }
  rep.components = static_cast<int>(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    int eg = static_cast<int>(2 - V[i] + E[i] - F[i]);
    rep.component_genus.push_back(eg);
    rep.euler_genus += eg;
  }
  rep.orientable = is_orientable(graph, rot);
  return rep;
}

bool SurfaceEmbedding::orientable() const { return is_orientable(graph, rot); }

int euler_genus_of(const SurfaceEmbedding& e, bool strict) {
  GenusReport r = e.genus_report();
  if (strict && r.components > 1) throw EmbeddingError("euler_genus_of: disconnected graph");
  return r.euler_genus;
}

VerifyResult verify_embedding(const Graph& g, const RotationSystem& r) {
  VerifyResult res;
  std::string err = check_rotation(g, r);
  if (!err.empty()) {
    res.diagnostic = err;
    return res;
  }
  SurfaceEmbedding e{g, r};
  FaceData fd = trace_faces(g, r);
  std::size_t total = 0;
  for (auto& f : fd.faces) total += f.length();
  if (total != 2 * g.num_edges()) {
    res.diagnostic = "face closure: walks cover " + std::to_string(total) + " sides, expected " +
                     std::to_string(2 * g.num_edges());
    return res;
  }
  GenusReport rep = e.genus_report();
  for (int c : rep.component_genus)
    if (c < 0) {
      res.diagnostic = "face closure: negative genus component";
      return res;
    }
  res.ok = true;
  res.euler_genus = rep.euler_genus;
  return res;
}

void flip_vertex(SurfaceEmbedding& e, VertexId v) {
  auto& rot = e.rot.rotation[v];
  std::reverse(rot.begin(), rot.end());
  std::set<EdgeId> done;
  for (EdgeId id : e.graph.incident(v)) {
    if (!done.insert(id).second) continue;
    if (e.graph.edge(id).is_loop()) continue;
    e.rot.signature[id] = -e.rot.sign(id);
  }
}

void normalize_signatures(SurfaceEmbedding& e) {
  std::set<VertexId> seen;
  for (VertexId s : e.graph.vertices()) {
    if (seen.count(s)) continue;
    seen.insert(s);
    std::deque<VertexId> q{s};
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      std::vector<EdgeId> inc = e.graph.incident(x);
      std::sort(inc.begin(), inc.end());
      for (EdgeId id : inc) {
        VertexId y = e.graph.other(id, x);
        if (seen.count(y)) continue;
        seen.insert(y);
        if (e.rot.sign(id) < 0) flip_vertex(e, y);
        q.push_back(y);
      }
    }
  }
  for (EdgeId id : e.graph.edges()) e.rot.signature[id] = e.rot.sign(id);
}

std::string to_json(const SurfaceEmbedding& e, bool include_edges) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = 1;
  ordered_json verts = ordered_json::array();
  for (VertexId v : e.graph.vertices()) {
    ordered_json vj;
    vj["id"] = v;
    ordered_json rot = ordered_json::array();
    auto it = e.rot.rotation.find(v);
    if (it != e.rot.rotation.end())
      for (Dart d : it->second) rot.push_back(dart_edge(d));
    vj["rotation"] = rot;
    verts.push_back(vj);
  }
  j["vertices"] = verts;
  ordered_json sig = ordered_json::object();
  for (EdgeId id : e.graph.edges()) sig[std::to_string(id)] = e.rot.sign(id);
  j["signatures"] = sig;
  if (include_edges) {
    ordered_json edges = ordered_json::array();
    for (auto& [id, ed] : e.graph.edge_map()) edges.push_back({{"id", id}, {"u", ed.u}, {"v", ed.v}});
    j["edges"] = edges;
  }
  return j.dump();
}

namespace {

SurfaceEmbedding decode(const nlohmann::json& j, const Graph* given) {
  SurfaceEmbedding e;
  if (!j.is_object() || !j.contains("vertices")) throw EmbeddingError("embedding json: no vertices");
  if (j.contains("schema_version") && j["schema_version"].get<int>() != 1)
    throw EmbeddingError("embedding json: unsupported schema_version");
  if (given) {
    e.graph = *given;
  } else {
    if (!j.contains("edges")) throw EmbeddingError("embedding json: no edges and no graph given");
    for (auto& vj : j["vertices"]) e.graph.add_vertex(vj["id"].get<VertexId>());
    for (auto& ej : j["edges"])
      e.graph.add_edge(ej["id"].get<EdgeId>(), ej["u"].get<VertexId>(), ej["v"].get<VertexId>());
  }
  for (auto& vj : j["vertices"]) {
    VertexId v = vj["id"].get<VertexId>();
    if (!e.graph.has_vertex(v)) throw EmbeddingError("embedding json: unknown vertex");
    std::vector<Dart> rot;
    std::set<EdgeId> used;
    for (auto& x : vj["rotation"]) {
      EdgeId id = x.get<EdgeId>();
      if (!e.graph.has_edge(id)) throw EmbeddingError("embedding json: unknown edge");
      const Edge& ed = e.graph.edge(id);
      int end;
      if (ed.is_loop())
        end = used.count(id) ? 1 : 0;
      else
        end = ed.u == v ? 0 : 1;
      used.insert(id);
      rot.push_back(make_dart(id, end));
    }
    e.rot.rotation[v] = rot;
  }
  if (j.contains("signatures"))
    for (auto& [k, s] : j["signatures"].items()) e.rot.signature[std::stoll(k)] = s.get<int>();
  return e;
}

}  // namespace

SurfaceEmbedding embedding_from_json(const std::string& text) {
  try {
    return decode(nlohmann::json::parse(text), nullptr);
  } catch (const nlohmann::json::exception& ex) {
    throw EmbeddingError(std::string("embedding json: ") + ex.what());
  }
}

SurfaceEmbedding embedding_from_json(const std::string& text, const Graph& g) {
  try {
    return decode(nlohmann::json::parse(text), &g);
  } catch (const nlohmann::json::exception& ex) {
    throw EmbeddingError(std::string("embedding json: ") + ex.what());
  }
}

std::string to_dot(const SurfaceEmbedding& e) {
  std::ostringstream os;
  os << "graph G {\n";
  for (VertexId v : e.graph.vertices()) {
    os << "  " << v << " [label=\"" << v << "\\n";
    auto it = e.rot.rotation.find(v);
    if (it != e.rot.rotation.end())
      for (std::size_t i = 0; i < it->second.size(); ++i)
        os << (i ? " " : "") << dart_edge(it->second[i]);
    os << "\"];\n";
  }
  for (auto& [id, ed] : e.graph.edge_map())
    os << "  " << ed.u << " -- " << ed.v << " [label=\"" << id << (e.rot.sign(id) < 0 ? "-" : "")
       << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace genuskit
