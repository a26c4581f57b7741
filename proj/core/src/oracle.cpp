#include "genuskit/oracle.hpp"
#include "genuskit/surgery.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <numeric>
#include <thread>

namespace genuskit {

int kmn_genus(int m, int n) {
  if (m < 1 || n < 1) throw GraphError("kmn_genus: m,n >= 1 required");
  if (m < 2 || n < 2) return 0;
  int p = (m - 2) * (n - 2);
  return (p + 3) / 4;
}

int kmn_euler_genus(int m, int n) {
  if (m < 1 || n < 1) throw GraphError("kmn_euler_genus: m,n >= 1 required");
  if (m < 2 || n < 2) return 0;
  int p = (m - 2) * (n - 2);
  return (p + 1) / 2;
}

namespace {

int ceil_div(int a, int b) { return a <= 0 ? 0 : (a + b - 1) / b; }

int component_lower_bound(const Graph& comp) {
  Graph s;
  for (VertexId v : comp.vertices()) s.add_vertex(v);
  std::set<std::pair<VertexId, VertexId>> seen;
  for (auto& [id, e] : comp.edge_map()) {
    if (e.is_loop()) continue;
    if (seen.insert(std::minmax(e.u, e.v)).second) s.add_edge(e.u, e.v);
  }
  int V = static_cast<int>(s.num_vertices()), E = static_cast<int>(s.num_edges());
  if (V < 3) return 0;
  if (is_bipartite(s)) return ceil_div(E - 2 * V + 4, 2);
  return ceil_div(E - 3 * V + 6, 3);
}

}  // namespace

int euler_lower_bound(const Graph& g) {
  int total = 0;
  for (auto& c : connected_components(g)) total += component_lower_bound(induced_subgraph(g, c));
  return total;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Shared {
  long max_states;
  Clock::time_point deadline;
  std::atomic<long> states{0};
  std::atomic<bool> aborted{false};
};

// Incremental edge-insertion search on one connected component.
class Search {
 public:
  Search(const Graph& g, bool orientable_only) : g_(g), orient_(orientable_only) {
    order_vertices();
    order_edges();
    int m = static_cast<int>(edges_.size());
    succ_.assign(2 * m, -1);
    pred_.assign(2 * m, -1);
    sign_.assign(m, 1);
    first_.assign(order_.size(), -1);
    deg_.assign(order_.size(), 0);
    stamp_.assign(4 * m, 0);
  }

  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_vertices() const { return static_cast<int>(order_.size()); }

  struct Choice {
    int au, av, s, eg;
  };

  // current Euler genus of the partial embedding (edges [0,k))
  int genus(int k) {
    if (k == 0) return 0;
    ++cur_stamp_;
    int faces = 0;
    for (int f0 = 0; f0 < 4 * k; ++f0) {
      if (stamp_[f0] == cur_stamp_) continue;
      ++faces;
      int f = f0;
      do {
        stamp_[f] = cur_stamp_;
        int d = f >> 1, s = f & 1;
        int t = sign_[d >> 1] > 0 ? (s ^ 1) : s;
        int b = 2 * (d ^ 1) + t;
        stamp_[b] = cur_stamp_;
        int bd = b >> 1;
        f = (b & 1) ? 2 * succ_[bd] : 2 * pred_[bd] + 1;
      } while (f != f0);
    }
    return 2 - placed_ + k - faces;
  }

  std::vector<Choice> choices(int k) {
    const auto& e = edges_[k];
    std::vector<Choice> out;
    auto anchors = [&](int v) {
      std::vector<int> a;
      if (first_[v] < 0) {
        a.push_back(-1);
        return a;
      }
      int d = first_[v];
      do {
        a.push_back(d);
        d = succ_[d];
      } while (d != first_[v]);
      return a;
    };
    std::vector<int> au = anchors(e.u);
    bool tree = e.tree;
    std::vector<int> signs = (tree || orient_) ? std::vector<int>{1} : std::vector<int>{1, -1};
    for (int a : au) {
      // for a loop the second end may sit right after the first
      insert_dart(2 * k, e.u, a);
      std::vector<int> av = anchors(e.v);
      remove_dart(2 * k, e.u);
      for (int b : av) {
        for (int s : signs) {
          apply(k, a, b, s);
          int eg = genus(k + 1);
          undo(k);
          out.push_back({a, b, s, eg});
        }
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const Choice& x, const Choice& y) { return x.eg < y.eg; });
    return out;
  }

  void apply(int k, int a, int b, int s) {
    const auto& e = edges_[k];
    insert_dart(2 * k, e.u, a);
    insert_dart(2 * k + 1, e.v, b);
    sign_[k] = s;
    if (e.tree) ++placed_;
  }

  void undo(int k) {
    const auto& e = edges_[k];
    remove_dart(2 * k + 1, e.v);
    remove_dart(2 * k, e.u);
    sign_[k] = 1;
    if (e.tree) --placed_;
  }

  // true: found an embedding of all edges with eg <= t
  bool dfs(int k, int t, Shared& sh) {
    if (k == num_edges()) return true;
    for (const Choice& c : choices(k)) {
      if (c.eg > t) break;
      if (!tick(sh)) return false;
      apply(k, c.au, c.av, c.s);
      if (dfs(k + 1, t, sh)) return true;
      undo(k);
      if (sh.aborted) return false;
    }
    return false;
  }

  // greedy completion from scratch
  int greedy() {
    for (int k = 0; k < num_edges(); ++k) {
      auto cs = choices(k);
      apply(k, cs[0].au, cs[0].av, cs[0].s);
    }
    return genus(num_edges());
  }

  void reset() {
    for (int k = num_edges() - 1; k >= 0; --k)
      if (succ_[2 * k] >= 0) undo(k);
  }

  SurfaceEmbedding extract() const {
    SurfaceEmbedding out;
    out.graph = g_;
    for (VertexId v : g_.vertices()) out.rot.rotation[v] = {};
    auto orig_dart = [&](int d) {
      const auto& e = edges_[d >> 1];
      const Edge& oe = g_.edge(e.id);
      int end;
      if (oe.is_loop())
        end = d & 1;
      else
        end = ((d & 1) == 0 ? order_[e.u] : order_[e.v]) == oe.u ? 0 : 1;
      return make_dart(e.id, end);
    };
    for (int v = 0; v < num_vertices(); ++v) {
      std::vector<Dart> rot;
      if (first_[v] >= 0) {
        int d = first_[v];
        do {
          rot.push_back(orig_dart(d));
          d = succ_[d];
        } while (d != first_[v]);
      }
      out.rot.rotation[order_[v]] = rot;
    }
    for (int k = 0; k < num_edges(); ++k) out.rot.signature[edges_[k].id] = sign_[k];
    return out;
  }

  // position-k state copy helpers for parallel roots
  int forced_prefix(Shared& sh, int t) {
    // follow edges with exactly one admissible choice
    int k = 0;
    while (k < num_edges()) {
      auto cs = choices(k);
      int ok = 0;
      for (auto& c : cs)
        if (c.eg <= t) ++ok;
      if (ok != 1) break;
      tick(sh);
      apply(k, cs[0].au, cs[0].av, cs[0].s);
      ++k;
    }
    return k;
  }

 private:
  struct LEdge {
    EdgeId id;
    int u, v;  // local vertex indices; u is the earlier-placed endpoint
    bool tree;
  };

  static bool tick(Shared& sh) {
    long s = ++sh.states;
    if (s > sh.max_states) sh.aborted = true;
    if ((s & 4095) == 0 && Clock::now() > sh.deadline) sh.aborted = true;
    return !sh.aborted;
  }

  void insert_dart(int d, int v, int after) {
    if (after < 0) {
      succ_[d] = pred_[d] = d;
      first_[v] = d;
    } else {
      int nx = succ_[after];
      succ_[d] = nx;
      pred_[nx] = d;
      succ_[after] = d;
      pred_[d] = after;
    }
    ++deg_[v];
  }

  void remove_dart(int d, int v) {
    --deg_[v];
    if (deg_[v] == 0) {
      first_[v] = -1;
    } else {
      succ_[pred_[d]] = succ_[d];
      pred_[succ_[d]] = pred_[d];
      if (first_[v] == d) first_[v] = succ_[d];
    }
    succ_[d] = pred_[d] = -1;
  }

  void order_vertices() {
    std::vector<VertexId> vs = g_.vertices();
    if (vs.empty()) return;
    std::map<VertexId, int> deg;
    for (VertexId v : vs) deg[v] = static_cast<int>(g_.degree(v));
    VertexId start = vs[0];
    for (VertexId v : vs)
      if (deg[v] > deg[start]) start = v;
    std::set<VertexId> placed{start};
    order_.push_back(start);
    std::map<VertexId, int> conn;
    auto bump = [&](VertexId v) {
      for (EdgeId e : g_.incident(v)) {
        VertexId w = g_.other(e, v);
        if (w != v && !placed.count(w)) ++conn[w];
      }
    };
    bump(start);
    while (order_.size() < vs.size()) {
      VertexId best = -1;
      for (VertexId v : vs) {
        if (placed.count(v)) continue;
        if (conn[v] == 0) continue;
        if (best < 0 || conn[v] > conn[best] || (conn[v] == conn[best] && deg[v] > deg[best]))
          best = v;
      }
      if (best < 0) throw GraphError("oracle: component not connected");
      placed.insert(best);
      order_.push_back(best);
      bump(best);
    }
  }

  void order_edges() {
    std::map<VertexId, int> pos;
    for (int i = 0; i < static_cast<int>(order_.size()); ++i) pos[order_[i]] = i;
    for (int p = 0; p < static_cast<int>(order_.size()); ++p) {
      VertexId v = order_[p];
      std::vector<std::pair<int, EdgeId>> back, loops;
      std::set<EdgeId> seen;
      for (EdgeId e : g_.incident(v)) {
        if (!seen.insert(e).second) continue;
        VertexId w = g_.other(e, v);
        if (w == v)
          loops.push_back({p, e});
        else if (pos[w] < p)
          back.push_back({pos[w], e});
      }
      std::sort(back.begin(), back.end());
      std::sort(loops.begin(), loops.end());
      for (std::size_t i = 0; i < back.size(); ++i)
        edges_.push_back({back[i].second, back[i].first, p, i == 0});
      for (auto& [q, e] : loops) edges_.push_back({e, p, p, false});
    }
  }

  const Graph& g_;
  bool orient_;
  std::vector<VertexId> order_;
  std::vector<LEdge> edges_;
  std::vector<int> succ_, pred_, sign_, first_, deg_;
  std::vector<unsigned> stamp_;
  unsigned cur_stamp_ = 0;
  int placed_ = 1;
};

struct ComponentResult {
  bool exact = false;
  int lower = 0, upper = 0;
  SurfaceEmbedding witness;
};

// Search for an embedding with eg <= t. 1 found, 0 exhausted, -1 aborted.
int search_bound(const Graph& comp, bool orient, int t, Shared& sh, int threads,
                 SurfaceEmbedding& witness) {
  Search root(comp, orient);
  int k0 = root.forced_prefix(sh, t);
  if (k0 == root.num_edges()) {
    if (root.genus(k0) > t) return 0;
    witness = root.extract();
    return 1;
  }
  auto cs = root.choices(k0);
  std::vector<Search::Choice> adm;
  for (auto& c : cs)
    if (c.eg <= t) adm.push_back(c);
  if (adm.empty()) return 0;

  std::atomic<int> next{0};
  std::atomic<int> best{static_cast<int>(adm.size())};
  std::mutex mu;
  std::vector<SurfaceEmbedding> found(adm.size());
  auto worker = [&]() {
    while (true) {
      int i = next++;
      if (i >= static_cast<int>(adm.size()) || i > best) return;
      Search s = root;
      s.apply(k0, adm[i].au, adm[i].av, adm[i].s);
      if (s.dfs(k0 + 1, t, sh)) {
        std::lock_guard<std::mutex> lk(mu);
        found[i] = s.extract();
        if (i < best) best = i;
      }
      if (sh.aborted) return;
    }
  };
  int nt = std::max(1, threads);
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (best < static_cast<int>(adm.size())) {
    // a witness at <= t exists even if other branches were cut short
    witness = found[best];
    return 1;
  }
  return sh.aborted ? -1 : 0;
}

ComponentResult solve_component(const Graph& comp, const OracleBudget& b, Shared& sh) {
  ComponentResult r;
  int step = b.orientable_only ? 2 : 1;
  int L = component_lower_bound(comp);
  if (b.orientable_only && L % 2) ++L;
  Search greedy(comp, b.orientable_only);
  int U = greedy.greedy();
  r.witness = greedy.extract();
  r.lower = L;
  r.upper = U;
  for (int t = L; t < U; t += step) {
    SurfaceEmbedding w;
    int res = search_bound(comp, b.orientable_only, t, sh, b.threads, w);
    if (res == 1) {
      // t-1 was exhausted, so the witness is optimal
      r.upper = w.euler_genus();
      r.witness = std::move(w);
      r.exact = true;
      r.lower = r.upper;
      return r;
    }
    if (res == -1) return r;
    r.lower = t + step;
  }
  r.exact = true;
  r.lower = r.upper;
  return r;
}

}  // namespace

OracleResult exact_euler_genus(const Graph& g, const OracleBudget& b) {
  if (b.max_states <= 0 || b.time_limit <= 0) throw GraphError("oracle: budget must be positive");
  Shared sh;
  sh.max_states = b.max_states;
  sh.deadline = Clock::now() + std::chrono::microseconds(static_cast<long>(b.time_limit * 1e6));
  OracleResult out;
  out.exact = true;
  SurfaceEmbedding all;
  for (auto& c : connected_components(g)) {
    Graph comp = induced_subgraph(g, c);
    ComponentResult r = solve_component(comp, b, sh);
    out.exact = out.exact && r.exact;
    out.lower += r.lower;
    out.upper += r.upper;
    all = all.graph.num_vertices() == 0 ? r.witness : disjoint_union(all, r.witness);
  }
  out.euler_genus = out.upper;
  out.states = sh.states;
  if (b.orientable_only) out.orientable_genus = out.upper / 2;
  for (auto& [id, l] : g.labels()) all.graph.set_label(id, l);
  out.witness = all;
  return out;
}

}  // namespace genuskit
