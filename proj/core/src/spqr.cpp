#include "genuskit/spqr.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "genuskit/planar.hpp"
#include "genuskit/surgery.hpp"

namespace genuskit {

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// Separation classes of {x,y}: edges joined through vertices other than x,y.
std::vector<std::vector<EdgeId>> separation_classes(const Graph& g, VertexId x, VertexId y) {
  std::vector<EdgeId> es = g.edges();
  std::map<EdgeId, int> at;
  for (std::size_t i = 0; i < es.size(); ++i) at[es[i]] = static_cast<int>(i);
  Dsu d(es.size());
  for (VertexId w : g.vertices()) {
    if (w == x || w == y) continue;
    const auto& inc = g.incident(w);
    for (std::size_t i = 1; i < inc.size(); ++i) d.unite(at[inc[0]], at[inc[i]]);
  }
  std::map<int, std::vector<EdgeId>> cls;
  for (std::size_t i = 0; i < es.size(); ++i) cls[d.find(static_cast<int>(i))].push_back(es[i]);
  std::vector<std::vector<EdgeId>> out;
  for (auto& [k, v] : cls) out.push_back(std::move(v));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_cycle_graph(const Graph& g) {
  for (VertexId v : g.vertices())
    if (g.degree(v) != 2) return false;
  return is_connected(g);
}

// Finds a split {side1, side2} or returns false.
bool find_split(const Graph& g, VertexId& sx, VertexId& sy, std::vector<EdgeId>& side1) {
  if (g.num_vertices() < 3) return false;
  std::vector<VertexId> vs = g.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      VertexId x = vs[i], y = vs[j];
      auto cls = separation_classes(g, x, y);
      if (cls.size() < 2) continue;
      std::vector<EdgeId> direct;
      std::vector<std::vector<EdgeId>> big;
      for (auto& c : cls) {
        const Edge& e = g.edge(c[0]);
        if (c.size() == 1 && std::minmax(e.u, e.v) == std::minmax(x, y))
          direct.push_back(c[0]);
        else
          big.push_back(c);
      }
      if (cls.size() == 2 && (cls[0].size() < 2 || cls[1].size() < 2)) continue;
      sx = x;
      sy = y;
      if (direct.size() >= 2 && !big.empty()) {
        side1 = direct;
      } else if (!big.empty() && (big.size() >= 2 || !direct.empty())) {
        side1 = big[0];
      } else {
        continue;
      }
      return true;
    }
  return false;
}

SpqrKind terminal_kind(const Graph& g) {
  if (g.num_vertices() == 2) return SpqrKind::P;
  if (is_cycle_graph(g)) return SpqrKind::S;
  return SpqrKind::R;
}

}  // namespace

std::size_t SpqrTree::count(SpqrKind k) const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [&](const SpqrNode& n) { return n.kind == k; }));
}

SpqrTree spqr_decompose(const Graph& h) {
  for (EdgeId e : h.edges())
    if (h.edge(e).is_loop()) throw GraphError("spqr_decompose: loops not allowed");
  if (!is_biconnected(h)) throw GraphError("spqr_decompose: graph is not 2-connected");
  SpqrTree t;
  t.first_virtual = std::max(h.next_edge_id(), h.max_edge_id() + 1);
  if (h.num_edges() == 1) {
    t.nodes.push_back({SpqrKind::Q, h, {}});
    t.adj.assign(1, {});
    return t;
  }

  EdgeId next_virtual = t.first_virtual;
  std::vector<Graph> done;
  std::deque<Graph> work{h};
  while (!work.empty()) {
    Graph g = std::move(work.front());
    work.pop_front();
    VertexId x, y;
    std::vector<EdgeId> side1;
    if (!find_split(g, x, y, side1)) {
      done.push_back(std::move(g));
      continue;
    }
    EdgeSet s1(side1.begin(), side1.end());
    Graph a, b;
    for (EdgeId e : g.edges()) {
      const Edge& ed = g.edge(e);
      Graph& tgt = s1.count(e) ? a : b;
      tgt.add_vertex(ed.u);
      tgt.add_vertex(ed.v);
      tgt.add_edge(e, ed.u, ed.v);
    }
    EdgeId v = next_virtual++;
    for (Graph* p : {&a, &b}) {
      p->add_vertex(x);
      p->add_vertex(y);
      p->add_edge(v, x, y);
    }
    work.push_back(std::move(a));
    work.push_back(std::move(b));
  }

  // merge adjacent bonds with bonds and cycles with cycles
  std::vector<SpqrKind> kind;
  for (auto& g : done) kind.push_back(terminal_kind(g));
  std::vector<bool> alive(done.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<EdgeId, std::vector<int>> holders;
    for (std::size_t i = 0; i < done.size(); ++i)
      if (alive[i])
        for (EdgeId e : done[i].edges())
          if (e >= t.first_virtual) holders[e].push_back(static_cast<int>(i));
    for (auto& [v, hs] : holders) {
      if (hs.size() != 2) continue;
      int i = hs[0], j = hs[1];
      if (kind[i] != kind[j] || kind[i] == SpqrKind::R) continue;
      done[i].remove_edge(v);
      for (EdgeId e : done[j].edges()) {
        if (e == v) continue;
        const Edge& ed = done[j].edge(e);
        done[i].add_vertex(ed.u);
        done[i].add_vertex(ed.v);
        done[i].add_edge(e, ed.u, ed.v);
      }
      alive[j] = false;
      changed = true;
      break;
    }
  }

  for (std::size_t i = 0; i < done.size(); ++i) {
    if (!alive[i]) continue;
    SpqrNode n;
    n.kind = kind[i];
    n.skeleton = std::move(done[i]);
    for (EdgeId e : n.skeleton.edges())
      if (e >= t.first_virtual) n.virtuals.push_back(e);
    t.nodes.push_back(std::move(n));
  }
  // deterministic order: by smallest real edge id
  auto min_real = [&](const SpqrNode& n) {
    EdgeId m = INT64_MAX;
    for (EdgeId e : n.skeleton.edges())
      if (e < t.first_virtual) m = std::min(m, e);
    return m;
  };
  std::stable_sort(t.nodes.begin(), t.nodes.end(),
                   [&](const SpqrNode& a, const SpqrNode& b) { return min_real(a) < min_real(b); });
  t.adj.assign(t.nodes.size(), {});
  std::map<EdgeId, std::vector<int>> holders;
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    for (EdgeId v : t.nodes[i].virtuals) holders[v].push_back(static_cast<int>(i));
  for (auto& [v, hs] : holders) {
    if (hs.size() != 2) throw GraphError("spqr_decompose: unpaired virtual edge");
    t.pairing[v] = {hs[0], hs[1]};
    t.adj[hs[0]].push_back(hs[1]);
    t.adj[hs[1]].push_back(hs[0]);
  }
  for (auto& a : t.adj) std::sort(a.begin(), a.end());
  return t;
}

EdgeSet subtree_real_edges(const SpqrTree& t, int root, int v) {
  // parent pointers from root
  std::vector<int> parent(t.nodes.size(), -2);
  std::deque<int> q{root};
  parent[root] = -1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : t.adj[x])
      if (parent[y] == -2) {
        parent[y] = x;
        q.push_back(y);
      }
  }
  EdgeSet out;
  std::deque<int> st{v};
  while (!st.empty()) {
    int x = st.front();
    st.pop_front();
    for (EdgeId e : t.nodes[x].skeleton.edges())
      if (!t.is_virtual(e)) out.insert(e);
    for (int y : t.adj[x])
      if (y != parent[x]) st.push_back(y);
  }
  return out;
}

namespace {

// Options for one skeleton: all its planar embeddings we distinguish.
std::vector<SurfaceEmbedding> skeleton_options(const SpqrNode& n, bool fix_mirror) {
  std::vector<SurfaceEmbedding> out;
  const Graph& g = n.skeleton;
  if (n.kind == SpqrKind::S || n.kind == SpqrKind::Q) {
    out.push_back({g, default_rotation(g)});
    for (EdgeId e : g.edges()) out.back().rot.signature[e] = 1;
    return out;
  }
  if (n.kind == SpqrKind::R) {
    auto pr = planar_embed(g);
    if (!pr.planar) throw GraphError("embedding enumeration: graph is not planar");
    out.push_back(*pr.embedding);
    if (!fix_mirror) {
      SurfaceEmbedding m = *pr.embedding;
      reflect(m);
      out.push_back(std::move(m));
    }
    return out;
  }
  // bond: cyclic order of its edges at x, reversed at y
  std::vector<VertexId> vs = g.vertices();
  VertexId x = vs[0], y = vs[1];
  std::vector<EdgeId> es = g.edges();
  std::sort(es.begin() + 1, es.end());
  do {
    SurfaceEmbedding e{g, {}};
    auto& rx = e.rot.rotation[x];
    auto& ry = e.rot.rotation[y];
    for (EdgeId id : es) {
      rx.push_back(make_dart(id, g.edge(id).u == x ? 0 : 1));
      ry.insert(ry.begin(), make_dart(id, g.edge(id).u == y ? 0 : 1));
      e.rot.signature[id] = 1;
    }
    out.push_back(std::move(e));
  } while (std::next_permutation(es.begin() + 1, es.end()));
  return out;
}

// Enumerate one 2-connected graph (or single edge / bond).
EnumerationStats enumerate_block(const Graph& b, std::size_t limit,
                                 const std::function<bool(const SurfaceEmbedding&)>& visit) {
  EnumerationStats st;
  SpqrTree t = spqr_decompose(b);
  std::vector<std::vector<SurfaceEmbedding>> opts;
  st.total = 1;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    opts.push_back(skeleton_options(t.nodes[i], i == 0));
    st.total *= static_cast<double>(opts.back().size());
  }
  // BFS order from node 0 for gluing
  std::vector<int> order{0}, parent(t.nodes.size(), -1);
  std::vector<EdgeId> via(t.nodes.size(), -1);
  std::vector<bool> seen(t.nodes.size(), false);
  seen[0] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    int x = order[k];
    for (EdgeId v : t.nodes[x].virtuals) {
      auto [a, c] = t.pairing.at(v);
      int y = a == x ? c : a;
      if (seen[y]) continue;
      seen[y] = true;
      parent[y] = x;
      via[y] = v;
      order.push_back(y);
    }
  }
  std::vector<std::size_t> pick(t.nodes.size(), 0);
  while (true) {
    if (st.visited >= limit) return st;
    SurfaceEmbedding cur = opts[0][pick[0]];
    for (std::size_t k = 1; k < order.size(); ++k) {
      int y = order[k];
      cur = two_sum(cur, via[y], opts[y][pick[y]], via[y]);
    }
    ++st.visited;
    if (!visit(cur)) return st;
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == opts[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  st.complete = true;
  return st;
}

}  // namespace

EnumerationStats enumerate_planar_embeddings(const Graph& h, std::size_t limit,
                                             const std::function<bool(const SurfaceEmbedding&)>& visit) {
  for (EdgeId e : h.edges())
    if (h.edge(e).is_loop()) throw GraphError("enumerate_planar_embeddings: loops not supported");
  if (!is_planar(h)) throw GraphError("enumerate_planar_embeddings: graph is not planar");

  BlockCutTree bct = biconnected_decompose(h);
  std::vector<Graph> blocks;
  for (auto& bl : bct.blocks) blocks.push_back(edge_subgraph(h, EdgeSet(bl.begin(), bl.end())));
  // each block's options are materialized once; the product is walked lazily
  std::vector<std::vector<SurfaceEmbedding>> opts(blocks.size());
  EnumerationStats st;
  st.total = 1;
  bool blocks_complete = true;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto s = enumerate_block(blocks[i], limit, [&](const SurfaceEmbedding& e) {
      opts[i].push_back(e);
      return true;
    });
    blocks_complete = blocks_complete && s.complete;
    st.total *= s.total;
  }
  bool nesting_unique = blocks.size() <= 1;

  std::vector<std::size_t> pick(blocks.size(), 0);
  while (true) {
    if (st.visited >= limit) return st;
    SurfaceEmbedding cur;
    cur.graph = h;
    for (VertexId v : h.vertices()) cur.rot.rotation[v];
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const SurfaceEmbedding& be = opts[i][pick[i]];
      for (auto& [v, rot] : be.rot.rotation) {
        auto& tgt = cur.rot.rotation[v];
        tgt.insert(tgt.end(), rot.begin(), rot.end());
      }
    }
    for (EdgeId e : h.edges()) cur.rot.signature[e] = 1;
    ++st.visited;
    if (!visit(cur)) return st;
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == opts[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  st.complete = blocks_complete && nesting_unique;
  return st;
}

}  // namespace genuskit
