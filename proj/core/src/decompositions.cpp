#include <algorithm>

#include "genuskit/decompositions.hpp"
#include "genuskit/planar.hpp"

namespace genuskit {

namespace {

struct Comp {
  VertexSet vs;
  EdgeSet es;
};

// components of g cut along s, in original ids, by smallest vertex
std::vector<Comp> cut_components(const Graph& g, const VertexSet& s) {
  CutResult c = cut_along(g, s);
  std::vector<Comp> out;
  for (auto& part : connected_components(c.graph)) {
    Comp k;
    for (VertexId v : part) {
      k.vs.insert(c.origin.at(v));
      for (EdgeId e : c.graph.incident(v)) k.es.insert(e);
    }
    out.push_back(std::move(k));
  }
  std::sort(out.begin(), out.end(), [](const Comp& a, const Comp& b) {
    return std::tie(*a.vs.begin(), a.es) < std::tie(*b.vs.begin(), b.es);
  });
  return out;
}

bool sees(const ApexInstance& inst, VertexId v, VertexId x) { return inst.graph.adjacent(v, x); }

std::size_t apex_degree(const ApexInstance& inst, VertexId v) { return apex_neighbours(inst, {v}).size(); }

// petal classes of v's H-edges: grouped by the component of H - v they reach
std::vector<std::vector<EdgeId>> petal_classes(const Graph& h, VertexId v) {
  VertexSet rest;
  for (VertexId w : h.vertices())
    if (w != v) rest.insert(w);
  std::map<VertexId, std::vector<EdgeId>> by_root;
  std::map<VertexId, VertexId> root;
  std::vector<std::vector<EdgeId>> loops;
  for (EdgeId e : h.incident(v)) {
    VertexId w = h.other(e, v);
    if (w == v) {
      loops.push_back({e});
      continue;
    }
    if (!root.count(w)) {
      VertexSet c = reach_within(h, w, rest);
      for (VertexId y : c) root[y] = *c.begin();
    }
    auto& cls = by_root[root[w]];
    if (std::find(cls.begin(), cls.end(), e) == cls.end()) cls.push_back(e);
  }
  std::vector<std::vector<EdgeId>> out;
  for (auto& [r, es] : by_root) out.push_back(es);
  for (auto& l : loops) out.push_back(l);
  return out;
}

Verdict fail(std::string s) { return {false, std::move(s)}; }

std::string show(const VertexSet& s) {
  std::string out = "{";
  for (VertexId v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

}  // namespace

// ---------------------------------------------------------------------------

PropellerSeparation propeller_separation(const ApexInstance& inst, const std::array<VertexId, 3>& triple) {
  const Graph& h = inst.planar_piece;
  auto [x1, x2, x3] = triple;
  PropellerSeparation out;
  BlockCutTree bct = biconnected_decompose(h);
  for (VertexId w : bct.cut_vertices)
    if (sees(inst, w, x1) && sees(inst, w, x2)) out.w_prime.insert(w);
  std::vector<Comp> comps = cut_components(h, out.w_prime);
  for (auto& c : comps) out.classes.push_back(c.vs);

  std::map<EdgeId, std::size_t> comp_of;
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (EdgeId e : comps[i].es) comp_of[e] = i;
  std::vector<bool> has_leaf(comps.size(), false);
  for (std::size_t i = 0; i < comps.size(); ++i) has_leaf[i] = comps[i].es.empty();
  for (std::size_t b = 0; b < bct.blocks.size(); ++b) {
    std::size_t cuts = 0;
    for (VertexId v : bct.block_vertices[b]) cuts += bct.cut_vertices.count(v);
    if (cuts <= 1) has_leaf[comp_of.at(bct.blocks[b].front())] = true;
  }
  std::vector<std::size_t> l1, l2;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    bool touch = false;
    for (VertexId v : comps[i].vs) touch = touch || sees(inst, v, x3);
    if (!touch) continue;
    (has_leaf[i] ? l2 : l1).push_back(i);
  }
  for (std::size_t i : l1) out.l_prime.push_back(comps[i].vs);

  // clusters as sets of component indices; propellers chosen greedily
  std::vector<std::set<std::size_t>> clusters;
  for (std::size_t i : l1) clusters.push_back({i});
  std::vector<VertexId> centres;
  std::set<std::size_t> covered;
  for (std::size_t i : l2) {
    if (covered.count(i)) continue;
    VertexId w = -1;
    for (VertexId v : comps[i].vs)
      if (out.w_prime.count(v)) {
        w = v;
        break;
      }
    if (w < 0) continue;  // already a component of H on its own
    std::set<std::size_t> members;
    VertexSet vs;
    for (std::size_t j : l2)
      if (!covered.count(j) && comps[j].vs.count(w)) {
        members.insert(j);
        vs.insert(comps[j].vs.begin(), comps[j].vs.end());
      }
    covered.insert(members.begin(), members.end());
    out.propellers.push_back({w, vs});
    clusters.push_back(members);
    centres.push_back(w);
  }

  for (VertexId w : out.w_prime) {
    std::vector<std::vector<EdgeId>> classes;
    std::vector<EdgeId> rest;
    std::map<std::size_t, std::size_t> cls_of_comp;
    for (std::size_t c = 0; c < clusters.size(); ++c)
      for (std::size_t i : clusters[c])
        if (comps[i].vs.count(w)) cls_of_comp[i] = c;
    std::map<std::size_t, std::vector<EdgeId>> grouped;
    for (EdgeId e : h.incident(w)) {
      auto it = cls_of_comp.find(comp_of.at(e));
      auto& bucket = it == cls_of_comp.end() ? rest : grouped[it->second];
      if (std::find(bucket.begin(), bucket.end(), e) == bucket.end()) bucket.push_back(e);
    }
    if (grouped.empty()) continue;
    for (auto& [c, es] : grouped) classes.push_back(es);
    if (!rest.empty()) classes.push_back(rest);
    bool centre = std::find(centres.begin(), centres.end(), w) != centres.end();
    if (classes.size() <= 1 && !centre) continue;
    std::vector<Splitting> steps;
    try {
      steps = realize_partition(inst, w, classes);
    } catch (const GraphError&) {
      std::map<std::size_t, std::vector<EdgeId>> fine;
      for (EdgeId e : h.incident(w)) {
        auto& b = fine[comp_of.at(e)];
        if (std::find(b.begin(), b.end(), e) == b.end()) b.push_back(e);
      }
      std::vector<std::vector<EdgeId>> fc;
      for (auto& [c, es] : fine) fc.push_back(es);
      steps = realize_partition(inst, w, fc);
      ++out.fallbacks;
    }
    for (auto& s : steps) out.seq.steps.push_back(s);
  }
  return out;
}

std::vector<VertexSet> separator_condition_failures(const SplitResult& r) {
  std::vector<VertexSet> out;
  const ApexInstance& in = r.instance;
  for (const VertexSet& frag : r.fragments) {
    if (apex_neighbours(in, frag).size() <= 2) continue;
    Graph sub = induced_subgraph(in.planar_piece, frag);
    BlockCutTree b = biconnected_decompose(sub);
    for (VertexId v : b.cut_vertices)
      if (apex_degree(in, v) >= 2) {
        out.push_back(frag);
        break;
      }
  }
  return out;
}

SeparatorSplit split_for_2apex_or_simple_separators(const ApexInstance& inst) {
  for (VertexId v : inst.planar_piece.vertices())
    if (apex_degree(inst, v) >= 3)
      throw GraphError("split_for_2apex_or_simple_separators: vertex " + std::to_string(v) + " sees three apices");
  SeparatorSplit out;
  if (inst.apices.size() <= 2) return out;
  std::vector<VertexId> xs(inst.apices.begin(), inst.apices.end());
  std::set<std::pair<VertexId, std::vector<EdgeId>>> seen;
  auto add = [&](const Splitting& s) {
    std::vector<EdgeId> side(s.side1.begin(), s.side1.end());
    std::sort(side.begin(), side.end());
    if (seen.insert({s.vertex, side}).second) out.seq.steps.push_back(s);
  };
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      for (VertexId x3 : xs) {
        if (x3 == xs[i] || x3 == xs[j]) continue;
        for (auto& s : propeller_separation(inst, {xs[i], xs[j], x3}).seq.steps) add(s);
      }
  // anything the per-triple pass left: split the offending separator into petals
  for (;;) {
    SplitResult r = apply_sequence(inst, out.seq);
    auto bad = separator_condition_failures(r);
    if (bad.empty()) break;
    VertexSet todo;
    for (auto& frag : bad) {
      BlockCutTree b = biconnected_decompose(induced_subgraph(r.instance.planar_piece, frag));
      for (VertexId v : b.cut_vertices)
        if (apex_degree(r.instance, v) >= 2) todo.insert(r.provenance.at(v));
    }
    for (VertexId v : todo) {
      for (auto& s : realize_partition(inst, v, petal_classes(inst.planar_piece, v))) add(s);
      ++out.fixups;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Isolation isolate_2connected(const ApexInstance& inst, const EdgeSet& c_edges) {
  const Graph& h = inst.planar_piece;
  if (c_edges.empty()) throw GraphError("isolate_2connected: empty union");
  VertexSet cv;
  for (EdgeId e : c_edges) {
    if (!h.has_edge(e)) throw GraphError("isolate_2connected: edge " + std::to_string(e) + " not in H");
    cv.insert(h.edge(e).u);
    cv.insert(h.edge(e).v);
  }
  if (!is_connected(edge_subgraph(h, c_edges))) throw GraphError("isolate_2connected: union is not connected");
  for (auto& b : biconnected_decompose(h).blocks) {
    std::size_t in = 0;
    for (EdgeId e : b) in += c_edges.count(e);
    if (in != 0 && in != b.size()) throw GraphError("isolate_2connected: union splits a block");
  }
  Graph rest = h;
  for (EdgeId e : c_edges) rest.remove_edge(e);
  Isolation out;
  for (const VertexSet& comp : connected_components(rest)) {
    VertexSet meet;
    for (VertexId v : comp)
      if (cv.count(v)) meet.insert(v);
    if (meet.empty()) continue;  // another component of H
    if (comp.size() == 1) continue;  // a vertex of C with nothing hanging off
    VertexId portal = *meet.begin();
    EdgeSet es;
    for (VertexId v : comp)
      for (EdgeId e : rest.incident(v)) es.insert(e);
    VertexSet outside = comp;
    outside.erase(portal);
    VertexSet ax = apex_neighbours(inst, outside);
    if (ax.size() >= 2) {
      out.c1.push_back(es);
      continue;
    }
    if (ax.empty()) {
      out.c4.push_back({comp, es, portal, std::nullopt});
      continue;
    }
    VertexId u = *ax.begin();
    VertexSet with_x = comp;
    with_x.insert(inst.apices.begin(), inst.apices.end());
    Graph gx = induced_subgraph(inst.graph, with_x);
    if (!is_planar(gx)) {
      out.c2.push_back(es);
      continue;
    }
    gx.add_edge(portal, u);
    if (!is_planar(gx)) {
      out.c3.push_back(es);
      continue;
    }
    out.c4.push_back({comp, es, portal, u});
  }
  return out;
}

// ---------------------------------------------------------------------------

ClusterTree locally_2apex_tree(const ApexInstance& inst, long m) {
  const Graph& h = inst.planar_piece;
  BlockCutTree bct = biconnected_decompose(h);
  for (std::size_t b = 0; b < bct.blocks.size(); ++b) {
    VertexSet vs(bct.block_vertices[b].begin(), bct.block_vertices[b].end());
    if (apex_neighbours(inst, vs).size() > 2)
      throw GraphError("locally_2apex_tree: block " + show(vs) + " sees more than two apices");
  }
  for (VertexId v : bct.cut_vertices)
    if (apex_degree(inst, v) > 1)
      throw GraphError("locally_2apex_tree: separator " + std::to_string(v) + " sees two apices");

  ClusterTree t;
  t.m = m;
  const std::size_t nb = bct.blocks.size();
  std::vector<int> owner(nb, -1);
  std::map<EdgeId, std::size_t> block_of;
  for (std::size_t b = 0; b < nb; ++b)
    for (EdgeId e : bct.blocks[b]) block_of[e] = b;
  auto block_set = [&](std::size_t b) {
    return VertexSet(bct.block_vertices[b].begin(), bct.block_vertices[b].end());
  };

  struct Job {
    std::size_t block;
    int parent;
    VertexId attach;
  };
  std::vector<Job> jobs;
  for (std::size_t b = 0; b < nb; ++b) {
    if (owner[b] >= 0) continue;
    jobs.push_back({b, -1, -1});
    while (!jobs.empty()) {
      Job j = jobs.front();
      jobs.erase(jobs.begin());
      if (owner[j.block] >= 0) continue;
      int id = static_cast<int>(t.clusters.size());
      Cluster c;
      c.parent = j.parent;
      c.attach = j.attach;
      c.vertices = block_set(j.block);
      c.edges.insert(bct.blocks[j.block].begin(), bct.blocks[j.block].end());
      owner[j.block] = id;
      // grow greedily while at most two apices are seen
      for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t q = 0; q < nb; ++q) {
          if (owner[q] >= 0) continue;
          VertexSet qs = block_set(q);
          bool touches = false;
          for (VertexId v : qs) touches = touches || c.vertices.count(v);
          if (!touches) continue;
          VertexSet both = c.vertices;
          both.insert(qs.begin(), qs.end());
          if (apex_neighbours(inst, both).size() > 2) continue;
          c.vertices = both;
          c.edges.insert(bct.blocks[q].begin(), bct.blocks[q].end());
          owner[q] = id;
          grew = true;
        }
      }
      t.clusters.push_back(c);
      // what hangs off this cluster: components of the unassigned blocks
      Graph rest;
      for (std::size_t q = 0; q < nb; ++q)
        if (owner[q] < 0)
          for (EdgeId e : bct.blocks[q]) {
            rest.add_vertex(h.edge(e).u);
            rest.add_vertex(h.edge(e).v);
            rest.add_edge(e, h.edge(e).u, h.edge(e).v);
          }
      for (const VertexSet& comp : connected_components(rest)) {
        VertexId at = -1;
        for (VertexId v : comp)
          if (t.clusters[id].vertices.count(v)) at = v;
        if (at < 0) continue;
        EdgeSet es;
        for (VertexId v : comp)
          for (EdgeId e : rest.incident(v)) es.insert(e);
        VertexSet outside = comp;
        outside.erase(at);
        VertexSet ax = apex_neighbours(inst, outside);
        Extremity ext{comp, es, at, ax.size() == 1 ? std::optional<VertexId>(*ax.begin()) : std::nullopt};
        if (ax.size() <= 1 && check_extremity(inst, ext).ok) {
          Cluster leaf;
          leaf.vertices = comp;
          leaf.edges = es;
          leaf.parent = id;
          leaf.attach = at;
          leaf.in_p = true;
          for (EdgeId e : es) owner[block_of.at(e)] = static_cast<int>(t.clusters.size());
          t.clusters.push_back(std::move(leaf));
          continue;
        }
        std::size_t start = nb;
        for (EdgeId e : h.incident(at))
          if (es.count(e)) start = std::min(start, block_of.at(e));
        jobs.push_back({start, id, at});
      }
    }
  }
  for (VertexId v : bct.isolated) {
    Cluster c;
    c.vertices = {v};
    t.clusters.push_back(std::move(c));
  }
  return t;
}

Verdict validate_cluster_tree(const ApexInstance& inst, const ClusterTree& t) {
  const Graph& h = inst.planar_piece;
  BlockCutTree bct = biconnected_decompose(h);
  std::map<EdgeId, int> edge_owner;
  std::map<VertexId, std::vector<int>> holders;
  for (std::size_t i = 0; i < t.clusters.size(); ++i) {
    const Cluster& c = t.clusters[i];
    int id = static_cast<int>(i);
    if (c.parent >= id) return fail("cluster " + std::to_string(i) + " has a later parent");
    if (c.parent >= 0 && (!c.vertices.count(c.attach) || !t.clusters[c.parent].vertices.count(c.attach)))
      return fail("cluster " + std::to_string(i) + " does not share its attach vertex");
    for (EdgeId e : c.edges) {
      if (!h.has_edge(e)) return fail("unknown edge");
      if (edge_owner.count(e)) return fail("edge " + std::to_string(e) + " in two clusters");
      edge_owner[e] = id;
      if (!c.vertices.count(h.edge(e).u) || !c.vertices.count(h.edge(e).v)) return fail("edge leaves its cluster");
    }
    for (VertexId v : c.vertices) holders[v].push_back(id);
    Graph sub = edge_subgraph(h, c.edges);
    for (VertexId v : c.vertices) sub.add_vertex(v);
    if (!is_connected(sub)) return fail("cluster " + std::to_string(i) + " is not connected");
    if (c.in_p) {
      Extremity ext{c.vertices, c.edges, c.attach, std::nullopt};
      VertexSet outside = c.vertices;
      outside.erase(c.attach);
      VertexSet ax = apex_neighbours(inst, outside);
      if (ax.size() == 1) ext.apex = *ax.begin();
      if (!check_extremity(inst, ext).ok) return fail("leaf " + std::to_string(i) + " is not an extremity");
    } else if (apex_neighbours(inst, c.vertices).size() > 2) {
      return fail("cluster " + std::to_string(i) + " sees more than two apices");
    }
  }
  if (edge_owner.size() != h.num_edges()) return fail("edges left out");
  for (std::size_t i = 0; i < t.clusters.size(); ++i)
    for (std::size_t j = i + 1; j < t.clusters.size(); ++j) {
      std::size_t common = 0;
      for (VertexId v : t.clusters[i].vertices) common += t.clusters[j].vertices.count(v);
      if (common > 1) return fail("clusters " + std::to_string(i) + " and " + std::to_string(j) + " share two vertices");
    }
  for (auto& b : bct.blocks)
    for (EdgeId e : b)
      if (edge_owner.at(e) != edge_owner.at(b.front())) return fail("a block is split between clusters");
  for (VertexId v : h.vertices()) {
    auto it = holders.find(v);
    if (it == holders.end()) return fail("vertex " + std::to_string(v) + " left out");
    // clusters holding v form a subtree: all but one have their parent holding v
    std::size_t tops = 0;
    for (int c : it->second) {
      int p = t.clusters[c].parent;
      if (p < 0 || !t.clusters[p].vertices.count(v)) ++tops;
    }
    if (tops != 1) return fail("clusters at " + std::to_string(v) + " are not a subtree");
    if (it->second.size() > 1 && !bct.cut_vertices.count(v))
      return fail("clusters meet at " + std::to_string(v) + ", not a separator");
  }
  return {};
}

std::vector<VertexSet> count_heavy_blocks(const ApexInstance& inst) {
  BlockCutTree bct = biconnected_decompose(inst.planar_piece);
  std::vector<VertexSet> out;
  for (auto& bv : bct.block_vertices) {
    VertexSet vs(bv.begin(), bv.end());
    if (apex_neighbours(inst, vs).size() >= 3) out.push_back(vs);
  }
  for (VertexId v : bct.isolated)
    if (apex_neighbours(inst, {v}).size() >= 3) out.push_back({v});
  return out;
}

}  // namespace genuskit
