#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "embed_internal.hpp"
#include "genuskit/surgery.hpp"

namespace genuskit {

using namespace detail;

namespace {

// H-edges at each vertex grouped by owner; vertices with one owner are skipped
std::map<VertexId, std::vector<std::vector<EdgeId>>> classes_by_owner(const Graph& h,
                                                                      const std::map<EdgeId, long>& owner) {
  std::map<VertexId, std::vector<std::vector<EdgeId>>> at;
  for (VertexId v : h.vertices()) {
    std::map<long, std::vector<EdgeId>> by;
    EdgeSet seen;
    for (EdgeId e : h.incident(v)) {
      if (!seen.insert(e).second) continue;
      auto it = owner.find(e);
      by[it == owner.end() ? -1 : it->second].push_back(e);
    }
    if (by.size() < 2) continue;
    for (auto& [o, es] : by) at[v].push_back(es);
  }
  return at;
}

}  // namespace

EmbedResult embed_locally_2apex(const ApexInstance& inst, long m) {
  ClusterTree t = locally_2apex_tree(inst, m);
  if (t.clusters.size() <= 1) {
    EmbedResult r = embed_2apex(inst);
    r.stats["clusters"] += static_cast<long>(t.clusters.size());
    return r;
  }
  std::map<EdgeId, long> owner;
  for (std::size_t i = 0; i < t.clusters.size(); ++i)
    for (EdgeId e : t.clusters[i].edges) owner[e] = static_cast<long>(i);
  std::size_t fb = 0;
  SplittingSequence seq = split_into_classes(inst, classes_by_owner(inst.planar_piece, owner), fb);
  EmbedResult r = embed_split(
      inst, seq, [](const ApexInstance& f) { return or_fallback(f, embed_2apex, "2-apex cluster"); }, "cluster");
  r.stats["clusters"] += static_cast<long>(t.clusters.size());
  r.stats["class_fallbacks"] += static_cast<long>(fb);
  return finish(std::move(r), inst.graph, "embed_locally_2apex");
}

EmbedResult embed_nearly_locally_2apex(const ApexInstance& inst, long m) {
  auto heavy = count_heavy_blocks(inst);
  if (heavy.size() > 1)
    throw GraphError("embed_nearly_locally_2apex: " + std::to_string(heavy.size()) +
                     " blocks see three or more apices");
  if (heavy.empty()) return embed_locally_2apex(inst, m);

  const Graph& h = inst.planar_piece;
  BlockCutTree b = biconnected_decompose(h);
  EdgeSet c_edges;
  for (std::size_t i = 0; i < b.blocks.size(); ++i)
    if (VertexSet(b.block_vertices[i].begin(), b.block_vertices[i].end()) == heavy[0])
      c_edges.insert(b.blocks[i].begin(), b.blocks[i].end());
  if (c_edges.empty()) return embed_by_insertion(inst);  // a lone vertex seeing three apices

  Isolation iso = isolate_2connected(inst, c_edges);
  std::map<EdgeId, long> owner;
  for (EdgeId e : c_edges) owner[e] = 0;
  long next = 1;
  for (auto* group : {&iso.c1, &iso.c2, &iso.c3})
    for (const EdgeSet& es : *group) {
      for (EdgeId e : es) owner[e] = next;
      ++next;
    }

  EmbedResult inner;
  std::size_t fb = 0;
  auto fn = [&](const Graph& gp) {
    ApexInstance ip = ApexInstance::make(gp, inst.apices);
    SplittingSequence seq = split_into_classes(ip, classes_by_owner(ip.planar_piece, owner), fb);
    EmbedResult r = embed_split(
        ip, seq,
        [&](const ApexInstance& f) {
          bool heavy_here = std::any_of(c_edges.begin(), c_edges.end(),
                                        [&](EdgeId e) { return f.planar_piece.has_edge(e); });
          if (heavy_here) return or_fallback(f, embed_2connected_kapex, "heavy block");
          return or_fallback(
              f, [m](const ApexInstance& s) { return embed_locally_2apex(s, m); }, "satellite");
        },
        "heavy block split");
    inner = finish(std::move(r), gp, "embed_nearly_locally_2apex inner");
    return inner.embedding;
  };
  ExpandResult ex = contract_then_expand(inst, iso.c4, fn);
  EmbedResult r = std::move(inner);
  r.embedding = std::move(ex.embedding);
  push(r, "extremities drawn back", ex.genus - ex.contracted_genus, "extremity contraction");
  r.stats["satellites_c1"] += static_cast<long>(iso.c1.size());
  r.stats["satellites_c2"] += static_cast<long>(iso.c2.size());
  r.stats["satellites_c3"] += static_cast<long>(iso.c3.size());
  r.stats["extremities_c4"] += static_cast<long>(iso.c4.size());
  r.stats["class_fallbacks"] += static_cast<long>(fb);
  return finish(std::move(r), inst.graph, "embed_nearly_locally_2apex");
}

EmbedResult embed_simple_separators(const ApexInstance& inst, long m) {
  const Graph& h = inst.planar_piece;
  BlockCutTree b = biconnected_decompose(h);
  for (VertexId c : b.cut_vertices) {
    auto xs = apex_neighbours(inst, VertexSet{c});
    if (xs.size() > 1)
      throw GraphError("embed_simple_separators: 1-separator " + std::to_string(c) + " sees " +
                       std::to_string(xs.size()) + " apices");
  }
  auto heavy = count_heavy_blocks(inst);
  if (heavy.size() <= 1) {
    EmbedResult r = embed_nearly_locally_2apex(inst, m);
    r.stats["heavy_blocks"] += static_cast<long>(heavy.size());
    return r;
  }

  // split every cut vertex whose branches hold heavy blocks on two or more sides
  std::map<VertexId, std::vector<std::vector<EdgeId>>> at;
  for (VertexId c : b.cut_vertices) {
    Graph rest = remove_vertices(h, {c});
    std::map<VertexId, std::size_t> branch;
    auto comps = connected_components(rest);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (VertexId v : comps[i]) branch[v] = i;
    std::set<std::size_t> sides;
    for (const VertexSet& blk : heavy)
      for (VertexId v : blk)
        if (v != c) {
          sides.insert(branch.at(v));
          break;
        }
    if (sides.size() < 2) continue;
    std::map<std::size_t, std::vector<EdgeId>> by;
    EdgeSet seen;
    for (EdgeId e : h.incident(c)) {
      VertexId o = h.other(e, c);
      if (o != c && seen.insert(e).second) by[branch.at(o)].push_back(e);
    }
    for (auto& [i, es] : by) at[c].push_back(es);
  }
  std::size_t fb = 0;
  SplittingSequence seq = split_into_classes(inst, at, fb);
  EmbedResult r = embed_split(
      inst, seq,
      [m](const ApexInstance& f) {
        return or_fallback(
            f, [m](const ApexInstance& s) { return embed_nearly_locally_2apex(s, m); }, "nearly locally 2-apex piece");
      },
      "heavy separation");
  r.stats["heavy_blocks"] += static_cast<long>(heavy.size());
  r.stats["class_fallbacks"] += static_cast<long>(fb);
  return finish(std::move(r), inst.graph, "embed_simple_separators");
}

EmbedResult embed_kapex(const ApexInstance& inst, int g_budget) {
  const Graph& g = inst.graph;
  if (inst.apices.empty()) {
    EmbedResult r;
    r.embedding = inst.stored_drawing();
    push(r, "planar drawing", 0, "planar embedding");
    r.stats["budget"] = g_budget;
    return finish(std::move(r), g, "embed_kapex");
  }

  // step 1: apex-apex edges wait until the end
  Graph g1 = g;
  std::vector<EdgeId> xx;
  for (auto& [id, e] : g.edge_map())
    if (inst.apices.count(e.u) && inst.apices.count(e.v)) xx.push_back(id);
  for (EdgeId id : xx) g1.remove_edge(id);
  ApexInstance i1 = ApexInstance::make(g1, inst.apices, inst.stored_drawing());

  // step 2: extremities are contracted once, here
  std::vector<Extremity> ext = find_extremities(i1);

  EmbedResult core;
  long seq_len = 0;
  auto steps3to6 = [&](const Graph& g2) {
    // step 3: a vertex seeing three or more apices keeps two apex edges
    Graph g3 = g2;
    std::vector<EdgeId> cut;
    for (VertexId v : g2.vertices()) {
      if (inst.apices.count(v)) continue;
      std::vector<EdgeId> ae;
      VertexSet xs;
      for (EdgeId e : g2.incident(v)) {
        VertexId o = g2.other(e, v);
        if (inst.apices.count(o)) {
          ae.push_back(e);
          xs.insert(o);
        }
      }
      if (xs.size() < 3) continue;
      std::sort(ae.begin(), ae.end());
      EdgeId keep1 = ae[0], keep2 = -1;
      for (EdgeId e : ae)
        if (g2.other(e, v) != g2.other(keep1, v)) {
          keep2 = e;
          break;
        }
      for (EdgeId e : ae)
        if (e != keep1 && e != keep2) cut.push_back(e);
    }
    for (EdgeId e : cut) g3.remove_edge(e);
    ApexInstance i3 = ApexInstance::make(g3, inst.apices);

    // steps 4-6
    SeparatorSplit ss = split_for_2apex_or_simple_separators(i3);
    seq_len = static_cast<long>(ss.seq.steps.size());
    long mb = extremity_number_bound(0, seq_len, static_cast<long>(inst.apices.size()));
    EmbedResult r = embed_split(
        i3, ss.seq,
        [mb](const ApexInstance& f) {
          if (active_apices(f).size() <= 2) return or_fallback(f, embed_2apex, "2-apex fragment");
          return or_fallback(
              f, [mb](const ApexInstance& s) { return embed_simple_separators(s, mb); },
              "simple-separator fragment");
        },
        "steps 4-6");
    r.stats["separator_fixups"] += static_cast<long>(ss.fixups);
    r.stats["M"] = mb;
    r = finish(std::move(r), g3, "embed_kapex steps 4-6");
    int d = 0;
    for (EdgeId e : cut) d += insert_edge_best(r.embedding, g2.edge(e).u, g2.edge(e).v, e).delta;
    push(r, "step 3: restore truncated apex edges", d, "apex edge truncation");
    r.stats["truncated_edges"] += static_cast<long>(cut.size());
    core = finish(std::move(r), g2, "embed_kapex step 3");
    return core.embedding;
  };

  if (ext.empty()) {
    steps3to6(g1);
  } else {
    ExpandResult ex = contract_then_expand(i1, ext, steps3to6);
    core.embedding = std::move(ex.embedding);
    push(core, "step 2: extremities drawn back", ex.genus - ex.contracted_genus, "extremity contraction");
  }
  core.stats["extremities"] = static_cast<long>(ext.size());
  core = finish(std::move(core), g1, "embed_kapex step 2");

  int d = 0;
  for (EdgeId e : xx) d += insert_edge_best(core.embedding, g.edge(e).u, g.edge(e).v, e).delta;
  push(core, "step 1: restore apex-apex edges", d, "apex-apex edge removal");
  core.stats["budget"] = g_budget;
  core.stats["splittings_step4"] = seq_len;
  return finish(std::move(core), g, "embed_kapex");
}

std::string to_json(const EmbedResult& r) {
  using nlohmann::json;
  json j;
  j["genus"] = r.genus;
  j["orientable"] = r.embedding.orientable();
  j["embedding"] = json::parse(to_json(r.embedding));
  j["ledger"] = json::array();
  for (auto& e : r.ledger) j["ledger"].push_back({{"step", e.step}, {"genus_added", e.genus_added}, {"source", e.source}});
  j["stats"] = json::object();
  for (auto& [k, v] : r.stats) j["stats"][k] = v;
  return j.dump();
}

}  // namespace genuskit
