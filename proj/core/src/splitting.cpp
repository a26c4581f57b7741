#include "genuskit/splitting.hpp"

#include <algorithm>

#include "json.hpp"

#include "genuskit/surgery.hpp"

namespace genuskit {

namespace {

using StepsAt = std::map<VertexId, std::vector<const Splitting*>>;

StepsAt validate(const ApexInstance& inst, const SplittingSequence& seq) {
  const SurfaceEmbedding& d = inst.stored_drawing();
  StepsAt at;
  for (const Splitting& s : seq.steps) {
    VertexId v = s.vertex;
    if (inst.apices.count(v)) throw GraphError("splitting on apex " + std::to_string(v));
    if (!inst.planar_piece.has_vertex(v)) throw GraphError("splitting on unknown vertex " + std::to_string(v));
    EdgeSet side(s.side1.begin(), s.side1.end());
    if (side.size() != s.side1.size()) throw GraphError("splitting repeats an edge");
    const auto& inc = inst.planar_piece.incident(v);
    for (EdgeId e : side)
      if (std::find(inc.begin(), inc.end(), e) == inc.end())
        throw GraphError("edge " + std::to_string(e) + " not incident to " + std::to_string(v));
    const auto& rot = d.rot.rotation.at(v);
    std::size_t changes = 0;
    for (std::size_t i = 0; i < rot.size(); ++i)
      if (side.count(dart_edge(rot[i])) != side.count(dart_edge(rot[(i + 1) % rot.size()]))) ++changes;
    if (changes > 2) throw GraphError("partition at " + std::to_string(v) + " is not contiguous");
    at[v].push_back(&s);
  }
  return at;
}

// classes of the common refinement at v, as edge lists, ordered by smallest edge
std::vector<std::vector<EdgeId>> refinement(const ApexInstance& inst, VertexId v,
                                            const std::vector<const Splitting*>& steps) {
  std::map<std::vector<bool>, std::vector<EdgeId>> by_sig;
  std::vector<EdgeId> inc = inst.planar_piece.incident(v);
  std::sort(inc.begin(), inc.end());
  inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
  for (EdgeId e : inc) {
    std::vector<bool> sig;
    for (const Splitting* s : steps)
      sig.push_back(std::find(s->side1.begin(), s->side1.end(), e) != s->side1.end());
    by_sig[sig].push_back(e);
  }
  std::vector<std::vector<EdgeId>> out;
  for (auto& [sig, es] : by_sig) out.push_back(es);
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.front() < b.front(); });
  return out;
}

SurfaceEmbedding rename(const SurfaceEmbedding& e, const std::map<VertexId, VertexId>& m) {
  auto f = [&](VertexId v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  };
  SurfaceEmbedding out;
  for (VertexId v : e.graph.vertices()) out.graph.add_vertex(f(v));
  for (auto& [id, ed] : e.graph.edge_map()) out.graph.add_edge(id, f(ed.u), f(ed.v));
  for (auto& [v, r] : e.rot.rotation) out.rot.rotation[f(v)] = r;
  out.rot.signature = e.rot.signature;
  return out;
}

}  // namespace

SplitResult apply_sequence(const ApexInstance& inst, const SplittingSequence& seq) {
  StepsAt at = validate(inst, seq);
  const SurfaceEmbedding& d = inst.stored_drawing();
  SplitResult res;
  Graph gp = inst.graph;
  RotationSystem rot = d.rot;
  VertexId fresh = std::max(inst.graph.max_vertex_id(), inst.graph.next_vertex_id() - 1) + 1;

  for (auto& [v, steps] : at) {
    std::vector<EdgeId> inc = inst.graph.incident(v);
    std::sort(inc.begin(), inc.end());
    inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
    for (EdgeId e : inc)
      if (inst.apices.count(inst.graph.other(e, v))) {
        gp.remove_edge(e);
        res.removed_apex_edges.push_back(e);
      }

    auto classes = refinement(inst, v, steps);
    std::vector<VertexId> ids{v};
    std::map<EdgeId, VertexId> owner;
    for (std::size_t j = 0; j < classes.size(); ++j) {
      VertexId c = v;
      if (j > 0) {
        c = fresh++;
        gp.add_vertex(c);
        ids.push_back(c);
        for (EdgeId e : classes[j]) {
          Edge old = gp.edge(e);
          gp.remove_edge(e);
          gp.add_edge(e, old.u == v ? c : old.u, old.v == v ? c : old.v);
        }
      }
      for (EdgeId e : classes[j]) owner[e] = c;
    }
    const auto old_rot = d.rot.rotation.at(v);
    for (VertexId c : ids) rot.rotation[c].clear();
    for (Dart x : old_rot) rot.rotation[owner.at(dart_edge(x))].push_back(x);
    res.copies[v] = ids;
    for (VertexId c : ids) res.provenance[c] = v;
  }
  std::sort(res.removed_apex_edges.begin(), res.removed_apex_edges.end());

  for (VertexId v : gp.vertices())
    if (!res.provenance.count(v)) res.provenance[v] = v;

  SurfaceEmbedding hd;
  hd.graph = remove_vertices(gp, inst.apices);
  hd.rot = std::move(rot);
  auto ver = verify_embedding(hd.graph, hd.rot);
  if (!ver.ok || ver.euler_genus != 0) throw EmbeddingError("apply_sequence: split drawing is not planar");

  res.instance.graph = std::move(gp);
  res.instance.apices = inst.apices;
  res.instance.planar_piece = hd.graph;
  res.instance.drawing = std::move(hd);
  res.fragments = connected_components(res.instance.planar_piece);
  std::sort(res.fragments.begin(), res.fragments.end(),
            [](const VertexSet& a, const VertexSet& b) { return *a.begin() < *b.begin(); });
  return res;
}

Graph fragment_graph(const SplitResult& r, std::size_t i) {
  VertexSet vs = r.fragments.at(i);
  vs.insert(r.instance.apices.begin(), r.instance.apices.end());
  return induced_subgraph(r.instance.graph, vs);
}

bool partitions_cross(const std::vector<EdgeId>& incident, const std::vector<EdgeId>& a,
                      const std::vector<EdgeId>& b) {
  EdgeSet sa(a.begin(), a.end()), sb(b.begin(), b.end());
  bool part[2][2] = {{false, false}, {false, false}};
  for (EdgeId e : incident) part[sa.count(e)][sb.count(e)] = true;
  return part[0][0] && part[0][1] && part[1][0] && part[1][1];
}

bool is_monotone(const ApexInstance& inst, const SplittingSequence& seq) {
  StepsAt at = validate(inst, seq);
  for (auto& [v, steps] : at) {
    const auto& inc = inst.planar_piece.incident(v);
    for (std::size_t i = 0; i < steps.size(); ++i)
      for (std::size_t j = i + 1; j < steps.size(); ++j)
        if (partitions_cross(inc, steps[i]->side1, steps[j]->side1)) return false;
  }
  return true;
}

std::vector<Splitting> realize_partition(const ApexInstance& inst, VertexId v,
                                         std::vector<std::vector<EdgeId>> classes) {
  const SurfaceEmbedding& d = inst.stored_drawing();
  const auto& rot = d.rot.rotation.at(v);
  std::size_t n = rot.size();
  std::map<EdgeId, int> cls;
  for (std::size_t j = 0; j < classes.size(); ++j)
    for (EdgeId e : classes[j]) cls[e] = static_cast<int>(j);
  for (Dart x : rot)
    if (!cls.count(dart_edge(x))) throw GraphError("realize_partition: classes miss an edge at " + std::to_string(v));
  if (classes.size() <= 1) return {{v, {}}};  // still needed: the splitting drops v's apex edges
  std::vector<std::size_t> class_darts(classes.size(), 0);
  for (Dart x : rot) ++class_darts[cls[dart_edge(x)]];

  std::vector<int> region(n, 0);  // current refinement, by dart position
  std::size_t regions = 1;
  std::vector<std::vector<EdgeId>> chosen;
  std::set<std::vector<EdgeId>> tried;
  const auto& inc = inst.planar_piece.incident(v);
  for (std::size_t len = 1; len < n && regions < classes.size(); ++len)
    for (std::size_t s = 0; s < n && regions < classes.size(); ++s) {
      std::vector<std::size_t> hit(classes.size(), 0);
      std::vector<bool> in(n, false);
      for (std::size_t k = 0; k < len; ++k) {
        in[(s + k) % n] = true;
        ++hit[cls[dart_edge(rot[(s + k) % n])]];
      }
      bool whole = true;
      for (std::size_t j = 0; j < classes.size(); ++j)
        if (hit[j] != 0 && hit[j] != class_darts[j]) whole = false;
      if (!whole) continue;
      std::vector<EdgeId> side;
      for (std::size_t i = 0; i < n; ++i)
        if (in[i]) side.push_back(dart_edge(rot[i]));
      std::sort(side.begin(), side.end());
      side.erase(std::unique(side.begin(), side.end()), side.end());
      if (!tried.insert(side).second) continue;
      bool crosses = false;
      for (auto& c : chosen)
        if (partitions_cross(inc, c, side)) crosses = true;
      if (crosses) continue;
      std::set<std::pair<int, bool>> parts;
      for (std::size_t i = 0; i < n; ++i) parts.insert({region[i], in[i]});
      if (parts.size() <= regions) continue;
      std::map<std::pair<int, bool>, int> relabel;
      for (auto& p : parts) relabel.emplace(p, static_cast<int>(relabel.size()));
      for (std::size_t i = 0; i < n; ++i) region[i] = relabel[{region[i], in[i]}];
      regions = parts.size();
      chosen.push_back(side);
    }
  if (regions != classes.size()) throw GraphError("realize_partition: classes cross at " + std::to_string(v));
  std::vector<Splitting> out;
  for (auto& c : chosen) out.push_back({v, c});
  return out;
}

SplittingSequence make_monotone(const ApexInstance& inst, const SplittingSequence& seq) {
  StepsAt at = validate(inst, seq);
  SplittingSequence out;
  for (auto& [v, steps] : at)
    for (auto& s : realize_partition(inst, v, refinement(inst, v, steps))) out.steps.push_back(s);
  return out;
}

GlueResult glue_fragmented(const ApexInstance& inst, const SplittingSequence& seq,
                           const std::vector<SurfaceEmbedding>& psi) {
  SplitResult sr = apply_sequence(inst, seq);
  if (psi.size() != sr.fragments.size())
    throw EmbeddingError("glue_fragmented: expected " + std::to_string(sr.fragments.size()) + " fragment embeddings");
  GlueResult res;
  res.k = static_cast<int>(seq.steps.size());
  res.x_count = static_cast<int>(inst.apices.size());

  VertexId fresh = sr.instance.graph.max_vertex_id() + 1;
  SurfaceEmbedding all;
  std::vector<std::map<VertexId, VertexId>> xcopy(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    Graph want = fragment_graph(sr, i);
    const Graph& got = psi[i].graph;
    bool same = want.num_vertices() == got.num_vertices() && want.num_edges() == got.num_edges();
    for (auto& [id, e] : want.edge_map())
      if (same && (!got.has_edge(id) || std::minmax(got.edge(id).u, got.edge(id).v) != std::minmax(e.u, e.v)))
        same = false;
    if (!same) throw EmbeddingError("glue_fragmented: embedding " + std::to_string(i) + " is not of its fragment");
    auto ver = verify_embedding(got, psi[i].rot);
    if (!ver.ok) throw EmbeddingError("glue_fragmented: fragment " + std::to_string(i) + ": " + ver.diagnostic);
    res.fragment_genus_sum += ver.euler_genus;

    SurfaceEmbedding p = psi[i];
    if (i == 0) {
      all = p;
      continue;
    }
    // apex-apex edges live in the first fragment only
    for (EdgeId id : p.graph.edges()) {
      const Edge& e = p.graph.edge(id);
      if (inst.apices.count(e.u) && inst.apices.count(e.v)) delete_edge(p, id);
    }
    for (VertexId x : inst.apices) xcopy[i][x] = fresh++;
    all = disjoint_union(all, rename(p, xcopy[i]));
  }

  // Whichever merge comes first across two components is free, so the
  // order matters; try both and keep the cheaper.
  auto run = [&](bool joins_first, int& join, int& undo, int& restore) {
    SurfaceEmbedding e = all;
    join = undo = restore = 0;
    auto joins = [&] {
      for (std::size_t i = 1; i < psi.size(); ++i)
        for (auto& [x, c] : xcopy[i]) join += identify_vertices(e, x, c);
    };
    auto undos = [&] {
      for (auto& [v, ids] : sr.copies)
        for (std::size_t j = 1; j < ids.size(); ++j) undo += identify_vertices(e, v, ids[j]);
    };
    if (joins_first) {
      joins();
      undos();
    } else {
      undos();
      joins();
    }
    for (EdgeId id : sr.removed_apex_edges) {
      const Edge& ed = inst.graph.edge(id);
      restore += insert_edge_best(e, ed.u, ed.v, id).delta;
    }
    return e;
  };
  int j1, u1, r1, j2, u2, r2;
  SurfaceEmbedding a = run(true, j1, u1, r1);
  if (!sr.copies.empty() && psi.size() > 1) {
    SurfaceEmbedding b = run(false, j2, u2, r2);
    if (j2 + u2 + r2 < j1 + u1 + r1) {
      a = std::move(b);
      j1 = j2, u1 = u2, r1 = r2;
    }
  }
  all = std::move(a);
  res.join_cost = j1;
  res.undo_cost = u1;
  res.restore_cost = r1;

  for (auto& [id, e] : inst.graph.edge_map())
    if (!all.graph.has_edge(id) || all.graph.edge(id).u != e.u || all.graph.edge(id).v != e.v)
      throw EmbeddingError("glue_fragmented: edge " + std::to_string(id) + " lost");
  if (all.graph.num_edges() != inst.graph.num_edges() || all.graph.num_vertices() != inst.graph.num_vertices())
    throw EmbeddingError("glue_fragmented: result is not G");
  all.graph = inst.graph;
  res.genus = all.euler_genus();
  if (res.k * res.x_count > 0)
    res.c1 = static_cast<double>(res.genus - res.fragment_genus_sum) / (res.k * res.x_count);
  res.embedding = std::move(all);
  return res;
}

std::string to_json(const SplittingSequence& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const Splitting& sp : s.steps) j.push_back({{"vertex", sp.vertex}, {"side1", sp.side1}});
  return j.dump();
}

SplittingSequence splitting_sequence_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw GraphError(std::string("splitting sequence: ") + ex.what());
  }
  if (!j.is_array()) throw GraphError("splitting sequence: expected an array");
  SplittingSequence s;
  for (auto& item : j) {
    if (!item.contains("vertex") || !item.contains("side1")) throw GraphError("splitting sequence: missing field");
    s.steps.push_back({item["vertex"].get<VertexId>(), item["side1"].get<std::vector<EdgeId>>()});
  }
  return s;
}

}  // namespace genuskit
