#include "genuskit/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace genuskit {

VertexId Graph::add_vertex() {
  while (adj_.count(next_v_)) ++next_v_;
  VertexId id = next_v_++;
  adj_[id];
  return id;
}

VertexId Graph::add_vertex(VertexId id) {
  if (id < 0) throw GraphError("negative vertex id");
  adj_[id];
  next_v_ = std::max(next_v_, id + 1);
  return id;
}

EdgeId Graph::add_edge(VertexId u, VertexId v) {
  while (edges_.count(next_e_)) ++next_e_;
  return add_edge(next_e_, u, v);
}

EdgeId Graph::add_edge(EdgeId id, VertexId u, VertexId v) {
  if (!has_vertex(u) || !has_vertex(v)) throw GraphError("edge endpoint not a vertex");
  if (id < 0 || edges_.count(id)) throw GraphError("edge id in use: " + std::to_string(id));
  edges_[id] = Edge{id, u, v};
  adj_[u].push_back(id);
  adj_[v].push_back(id);
  next_e_ = std::max(next_e_, id + 1);
  return id;
}

void Graph::remove_edge(EdgeId e) {
  auto it = edges_.find(e);
  if (it == edges_.end()) throw GraphError("no such edge " + std::to_string(e));
  for (VertexId w : {it->second.u, it->second.v}) {
    auto& inc = adj_[w];
    auto p = std::find(inc.begin(), inc.end(), e);
    if (p != inc.end()) inc.erase(p);
  }
  edges_.erase(it);
}

void Graph::remove_vertex(VertexId v) {
  if (!has_vertex(v)) throw GraphError("no such vertex " + std::to_string(v));
  std::vector<EdgeId> inc = adj_[v];
  std::sort(inc.begin(), inc.end());
  inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
  for (EdgeId e : inc) remove_edge(e);
  adj_.erase(v);
  labels_.erase(v);
}

const Edge& Graph::edge(EdgeId e) const {
  auto it = edges_.find(e);
  if (it == edges_.end()) throw GraphError("no such edge " + std::to_string(e));
  return it->second;
}

std::vector<VertexId> Graph::vertices() const {
  std::vector<VertexId> out;
  out.reserve(adj_.size());
  for (auto& [v, _] : adj_) out.push_back(v);
  return out;
}

std::vector<EdgeId> Graph::edges() const {
  std::vector<EdgeId> out;
  out.reserve(edges_.size());
  for (auto& [e, _] : edges_) out.push_back(e);
  return out;
}

const std::vector<EdgeId>& Graph::incident(VertexId v) const {
  auto it = adj_.find(v);
  if (it == adj_.end()) throw GraphError("no such vertex " + std::to_string(v));
  return it->second;
}

std::vector<VertexId> Graph::neighbors(VertexId v) const {
  std::vector<VertexId> out;
  for (EdgeId e : incident(v)) {
    VertexId w = other(e, v);
    if (w != v) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexId Graph::other(EdgeId e, VertexId v) const {
  const Edge& ed = edge(e);
  if (ed.u == v) return ed.v;
  if (ed.v == v) return ed.u;
  throw GraphError("vertex not on edge");
}

std::vector<EdgeId> Graph::edges_between(VertexId a, VertexId b) const {
  std::vector<EdgeId> out;
  if (!has_vertex(a) || !has_vertex(b)) return out;
  for (EdgeId e : incident(a)) {
    const Edge& ed = edge(e);
    if ((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Graph::is_simple() const {
  std::set<std::pair<VertexId, VertexId>> seen;
  for (auto& [id, e] : edges_) {
    if (e.is_loop()) return false;
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) return false;
  }
  return true;
}

std::optional<std::string> Graph::label(VertexId v) const {
  auto it = labels_.find(v);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

bool Graph::operator==(const Graph& o) const {
  if (vertices() != o.vertices()) return false;
  if (edges_.size() != o.edges_.size()) return false;
  for (auto& [id, e] : edges_) {
    auto it = o.edges_.find(id);
    if (it == o.edges_.end()) return false;
    if (std::minmax(e.u, e.v) != std::minmax(it->second.u, it->second.v)) return false;
  }
  return true;
}

Graph induced_subgraph(const Graph& g, const VertexSet& vs) {
  Graph h;
  for (VertexId v : vs) {
    if (!g.has_vertex(v)) throw GraphError("induced_subgraph: unknown vertex");
    h.add_vertex(v);
    if (auto l = g.label(v)) h.set_label(v, *l);
  }
  for (auto& [id, e] : g.edge_map())
    if (vs.count(e.u) && vs.count(e.v)) h.add_edge(id, e.u, e.v);
  return h;
}

Graph edge_subgraph(const Graph& g, const EdgeSet& es) {
  Graph h;
  for (EdgeId id : es) {
    const Edge& e = g.edge(id);
    h.add_vertex(e.u);
    h.add_vertex(e.v);
    h.add_edge(id, e.u, e.v);
  }
  return h;
}

Graph remove_vertices(const Graph& g, const VertexSet& vs) {
  VertexSet keep;
  for (VertexId v : g.vertices())
    if (!vs.count(v)) keep.insert(v);
  return induced_subgraph(g, keep);
}

VertexSet reach_within(const Graph& g, VertexId v, const VertexSet& vs) {
  VertexSet seen{v};
  std::deque<VertexId> q{v};
  while (!q.empty()) {
    VertexId x = q.front();
    q.pop_front();
    for (EdgeId e : g.incident(x)) {
      VertexId y = g.other(e, x);
      if (vs.count(y) && seen.insert(y).second) q.push_back(y);
    }
  }
  return seen;
}

std::vector<VertexSet> connected_components(const Graph& g) {
  std::vector<VertexSet> out;
  VertexSet seen;
  for (VertexId v : g.vertices()) {
    if (seen.count(v)) continue;
    VertexSet comp{v};
    std::deque<VertexId> q{v};
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      for (EdgeId e : g.incident(x)) {
        VertexId y = g.other(e, x);
        if (comp.insert(y).second) q.push_back(y);
      }
    }
    seen.insert(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

bool is_bipartite(const Graph& g) {
  std::map<VertexId, int> col;
  for (VertexId s : g.vertices()) {
    if (col.count(s)) continue;
    col[s] = 0;
    std::deque<VertexId> q{s};
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      for (EdgeId e : g.incident(x)) {
        VertexId y = g.other(e, x);
        auto it = col.find(y);
        if (it == col.end()) {
          col[y] = 1 - col[x];
          q.push_back(y);
        } else if (it->second == col[x]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<std::size_t> BlockCutTree::blocks_at(VertexId v) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < block_vertices.size(); ++i)
    if (std::binary_search(block_vertices[i].begin(), block_vertices[i].end(), v)) out.push_back(i);
  return out;
}

BlockCutTree biconnected_decompose(const Graph& g) {
  BlockCutTree t;
  t.forest = connected_components(g).size() > 1;
  std::map<VertexId, int> disc, low;
  std::vector<EdgeId> stack;
  int timer = 0;
  std::vector<std::vector<EdgeId>> raw;

  std::function<void(VertexId, EdgeId)> dfs = [&](VertexId v, EdgeId parent_edge) {
    disc[v] = low[v] = timer++;
    for (EdgeId e : g.incident(v)) {
      if (e == parent_edge) continue;
      const Edge& ed = g.edge(e);
      if (ed.is_loop()) continue;
      VertexId w = g.other(e, v);
      auto it = disc.find(w);
      if (it == disc.end()) {
        stack.push_back(e);
        dfs(w, e);
        low[v] = std::min(low[v], low[w]);
        if (low[w] >= disc[v]) {
          std::vector<EdgeId> blk;
          while (true) {
            EdgeId f = stack.back();
            stack.pop_back();
            blk.push_back(f);
            if (f == e) break;
          }
          raw.push_back(std::move(blk));
        }
      } else if (it->second < disc[v]) {
        stack.push_back(e);
        low[v] = std::min(low[v], it->second);
      }
    }
  };
  for (VertexId v : g.vertices()) {
    if (disc.count(v)) continue;
    dfs(v, -1);
  }
  for (auto& [id, e] : g.edge_map())
    if (e.is_loop()) raw.push_back({id});

  for (auto& b : raw) std::sort(b.begin(), b.end());
  std::sort(raw.begin(), raw.end());
  std::map<VertexId, int> count;
  for (auto& b : raw) {
    VertexSet vs;
    for (EdgeId e : b) {
      vs.insert(g.edge(e).u);
      vs.insert(g.edge(e).v);
    }
    t.blocks.push_back(b);
    t.block_vertices.emplace_back(vs.begin(), vs.end());
    bool loop_block = b.size() == 1 && g.edge(b[0]).is_loop();
    if (!loop_block)
      for (VertexId v : vs) ++count[v];
  }
  for (auto& [v, c] : count)
    if (c >= 2) t.cut_vertices.insert(v);
  for (std::size_t i = 0; i < t.blocks.size(); ++i) {
    bool loop_block = t.blocks[i].size() == 1 && g.edge(t.blocks[i][0]).is_loop();
    if (loop_block) continue;
    for (VertexId v : t.block_vertices[i])
      if (t.cut_vertices.count(v)) t.tree.emplace_back(i, v);
  }
  for (VertexId v : g.vertices())
    if (g.degree(v) == 0) t.isolated.push_back(v);
  return t;
}

bool is_biconnected(const Graph& g) {
  if (g.num_vertices() < 2 || !is_connected(g)) return false;
  return biconnected_decompose(g).cut_vertices.empty();
}

CutResult cut_along(const Graph& g, const VertexSet& s) {
  CutResult r;
  r.graph = g;
  for (VertexId v : g.vertices()) r.origin[v] = v;
  for (VertexId v : s) {
    if (!g.has_vertex(v)) throw GraphError("cut_along: vertex not in graph");
    Graph& cur = r.graph;
    // components of cur - v that touch v
    VertexSet rest;
    for (VertexId w : cur.vertices())
      if (w != v) rest.insert(w);
    std::vector<VertexSet> comps;
    VertexSet seen;
    for (VertexId w : cur.neighbors(v)) {
      if (seen.count(w)) continue;
      VertexSet c = reach_within(cur, w, rest);
      seen.insert(c.begin(), c.end());
      comps.push_back(std::move(c));
    }
    if (comps.size() <= 1) continue;
    std::sort(comps.begin(), comps.end(),
              [](const VertexSet& a, const VertexSet& b) { return *a.begin() < *b.begin(); });
    for (std::size_t i = 1; i < comps.size(); ++i) {
      VertexId copy = cur.add_vertex(std::max(cur.next_vertex_id(), cur.max_vertex_id() + 1));
      r.origin[copy] = r.origin[v];
      if (auto l = cur.label(v)) cur.set_label(copy, *l);
      std::vector<EdgeId> move;
      for (EdgeId e : cur.incident(v)) {
        VertexId w = cur.other(e, v);
        if (w != v && comps[i].count(w)) move.push_back(e);
      }
      std::sort(move.begin(), move.end());
      move.erase(std::unique(move.begin(), move.end()), move.end());
      for (EdgeId e : move) {
        VertexId w = cur.other(e, v);
        cur.remove_edge(e);
        cur.add_edge(e, copy, w);
      }
    }
  }
  return r;
}

ContractResult contract_set(const Graph& g, const VertexSet& u, bool simplify) {
  if (u.empty()) throw GraphError("contract_set: empty set");
  for (VertexId v : u)
    if (!g.has_vertex(v)) throw GraphError("contract_set: vertex not in graph");
  ContractResult r;
  r.merged = *u.begin();
  r.genus_delta_bound = static_cast<int>(u.size()) - 1;
  auto rep = [&](VertexId v) { return u.count(v) ? r.merged : v; };
  for (VertexId v : g.vertices())
    if (!u.count(v) || v == r.merged) {
      r.graph.add_vertex(v);
      if (auto l = g.label(v)) r.graph.set_label(v, *l);
    }
  std::set<std::pair<VertexId, VertexId>> seen;
  for (auto& [id, e] : g.edge_map()) {
    VertexId a = rep(e.u), b = rep(e.v);
    if (a == b && u.size() > 1 && u.count(e.u)) continue;  // self-loops from contraction dropped
    if (simplify) {
      if (a == b) continue;
      if (!seen.insert(std::minmax(a, b)).second) continue;
    }
    r.graph.add_edge(id, a, b);
  }
  return r;
}

MinorCheck verify_minor_mapping(const Graph& g, const MinorMapping& m) {
  MinorCheck c;
  auto fail = [&](std::string reason, std::string detail) {
    c.ok = false;
    c.reason = std::move(reason);
    c.detail = std::move(detail);
    return c;
  };
  std::map<VertexId, VertexId> owner;
  for (VertexId a : m.minor.vertices()) {
    auto it = m.branch_sets.find(a);
    if (it == m.branch_sets.end() || it->second.empty())
      return fail("nonempty", "branch set of " + std::to_string(a) + " is empty");
    for (VertexId v : it->second) {
      if (!g.has_vertex(v))
        return fail("membership", "vertex " + std::to_string(v) + " not in host");
      auto [p, fresh] = owner.emplace(v, a);
      if (!fresh)
        return fail("disjointness", "vertex " + std::to_string(v) + " in branch sets " +
                                        std::to_string(p->second) + " and " + std::to_string(a));
    }
  }
  for (VertexId a : m.minor.vertices()) {
    const VertexSet& bs = m.branch_sets.at(a);
    if (reach_within(g, *bs.begin(), bs).size() != bs.size())
      return fail("connectivity", "branch set of " + std::to_string(a) + " is disconnected");
  }
  std::set<std::pair<VertexId, VertexId>> witnessed;
  for (auto& [id, e] : g.edge_map()) {
    auto a = owner.find(e.u), b = owner.find(e.v);
    if (a == owner.end() || b == owner.end()) continue;
    witnessed.insert(std::minmax(a->second, b->second));
  }
  for (auto& [id, e] : m.minor.edge_map()) {
    if (e.is_loop()) continue;
    if (!witnessed.count(std::minmax(e.u, e.v)))
      return fail("edge", "minor edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                              " has no witness");
  }
  c.ok = true;
  return c;
}

Petals petals_and_propellers(const Graph& h, VertexId v) {
  Petals p;
  if (!h.has_vertex(v)) throw GraphError("petals: unknown vertex");
  VertexSet rest;
  for (VertexId w : h.vertices())
    if (w != v) rest.insert(w);
  Graph without = remove_vertices(h, {v});
  std::vector<VertexSet> comps = connected_components(without);
  if (comps.size() <= 1) {
    p.not_cut_vertex = true;
    p.petals.push_back(h);
    return p;
  }
  for (auto& c : comps) {
    VertexSet vs = c;
    vs.insert(v);
    p.petals.push_back(induced_subgraph(h, vs));
  }
  return p;
}

Graph complete_graph(int n) {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph complete_bipartite(int m, int n) {
  Graph g;
  for (int i = 0; i < m + n; ++i) g.add_vertex(i);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) g.add_edge(i, m + j);
  return g;
}

Graph cycle_graph(int n) {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex(i);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

Graph path_graph(int n) {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex(i);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph grid_graph(int rows, int cols) {
  Graph g;
  for (int i = 0; i < rows * cols; ++i) g.add_vertex(i);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows) g.add_edge(r * cols + c, (r + 1) * cols + c);
    }
  return g;
}

}  // namespace genuskit
