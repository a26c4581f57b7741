#include "genuskit/face_cover.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "genuskit/planar.hpp"
#include "genuskit/spqr.hpp"

namespace genuskit {

bool is_face_cover(const SurfaceEmbedding& e, const FaceCover& c) {
  FaceData fd = e.faces();
  VertexSet hit;
  for (int f : c.faces) {
    if (f < 0 || f >= static_cast<int>(fd.faces.size())) return false;
    for (VertexId v : face_vertices(fd.faces[f])) hit.insert(v);
  }
  return std::includes(hit.begin(), hit.end(), c.covered.begin(), c.covered.end());
}

namespace {

struct CoverSearch {
  std::vector<std::vector<int>> face_targets;  // face -> target indices
  std::vector<std::vector<int>> target_faces;  // target -> faces ascending
  std::size_t max_face = 0;
  std::vector<int> count;  // times each target is covered
  std::vector<int> chosen;
  int uncovered = 0;

  bool rec(int start, int k) {
    if (uncovered == 0) return true;
    int slots = k - static_cast<int>(chosen.size());
    if (slots <= 0) return false;
    if (static_cast<std::size_t>(slots) * max_face < static_cast<std::size_t>(uncovered)) return false;
    // the uncovered target whose last face comes first bounds the next pick
    int bound = INT32_MAX;
    for (std::size_t t = 0; t < count.size(); ++t)
      if (count[t] == 0) bound = std::min(bound, target_faces[t].back());
    for (int f = start; f <= bound; ++f) {
      bool useful = false;
      for (int t : face_targets[f])
        if (count[t] == 0) useful = true;
      if (!useful) continue;
      for (int t : face_targets[f])
        if (count[t]++ == 0) --uncovered;
      chosen.push_back(f);
      if (rec(f + 1, k)) return true;
      chosen.pop_back();
      for (int t : face_targets[f])
        if (--count[t] == 0) ++uncovered;
    }
    return false;
  }
};

}  // namespace

FaceCover min_face_cover(const SurfaceEmbedding& e, const VertexSet& u) {
  FaceCover out;
  out.covered = u;
  if (u.empty()) return out;
  for (VertexId v : u)
    if (!e.graph.has_vertex(v)) throw GraphError("min_face_cover: unknown vertex " + std::to_string(v));
  FaceData fd = e.faces();
  std::vector<VertexId> targets(u.begin(), u.end());
  std::map<VertexId, int> tidx;
  for (std::size_t i = 0; i < targets.size(); ++i) tidx[targets[i]] = static_cast<int>(i);
  CoverSearch s;
  s.face_targets.resize(fd.faces.size());
  s.target_faces.resize(targets.size());
  for (std::size_t f = 0; f < fd.faces.size(); ++f) {
    for (VertexId v : face_vertices(fd.faces[f])) {
      auto it = tidx.find(v);
      if (it == tidx.end()) continue;
      s.face_targets[f].push_back(it->second);
      s.target_faces[it->second].push_back(static_cast<int>(f));
    }
    s.max_face = std::max(s.max_face, s.face_targets[f].size());
  }
  s.count.assign(targets.size(), 0);
  for (int k = 1; k <= static_cast<int>(targets.size()); ++k) {
    s.uncovered = static_cast<int>(targets.size());
    std::fill(s.count.begin(), s.count.end(), 0);
    s.chosen.clear();
    if (s.rec(0, k)) {
      out.faces = s.chosen;
      return out;
    }
  }
  throw GraphError("min_face_cover: no cover found");
}

CoverOverEmbeddings min_face_cover_over_embeddings(const Graph& h, const VertexSet& u,
                                                   std::size_t scale_limit) {
  CoverOverEmbeddings best;
  bool forest = h.num_edges() + connected_components(h).size() == h.num_vertices();
  if (forest || h.num_edges() == 0) {
    auto pr = planar_embed(h);
    best.embedding = *pr.embedding;
    best.cover = min_face_cover(best.embedding, u);
    best.exact = true;
    best.tried = 1;
    return best;
  }
  bool have = false;
  auto st = enumerate_planar_embeddings(h, scale_limit, [&](const SurfaceEmbedding& e) {
    FaceCover c = min_face_cover(e, u);
    if (!have || c.faces.size() < best.cover.faces.size()) {
      best.embedding = e;
      best.cover = c;
      have = true;
    }
    // a single face cannot be beaten
    return best.cover.faces.size() > 1;
  });
  best.tried = st.visited;
  best.exact = st.complete || best.cover.faces.size() <= 1;
  return best;
}

bool pairwise_one_shared(const SurfaceEmbedding& e, const std::vector<int>& faces) {
  FaceData fd = e.faces();
  std::vector<VertexSet> vs;
  for (int f : faces) vs.push_back(face_vertices(fd.faces.at(f)));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      int shared = 0;
      for (VertexId v : vs[i])
        if (vs[j].count(v)) ++shared;
      if (shared > 1) return false;
    }
  return true;
}

namespace {

// Largest subset with no two members adjacent in `conflict`.
std::vector<int> max_independent(const std::vector<std::vector<bool>>& conflict) {
  int n = static_cast<int>(conflict.size());
  std::vector<int> best, cur;
  if (n > 40) {
    // greedy by fewest conflicts
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto deg = [&](int i) { return std::count(conflict[i].begin(), conflict[i].end(), true); };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return deg(a) < deg(b); });
    std::vector<bool> blocked(n, false);
    for (int i : order) {
      if (blocked[i]) continue;
      best.push_back(i);
      for (int j = 0; j < n; ++j)
        if (conflict[i][j]) blocked[j] = true;
    }
    std::sort(best.begin(), best.end());
    return best;
  }
  std::function<void(int, std::vector<bool>&)> rec = [&](int i, std::vector<bool>& blocked) {
    if (cur.size() + static_cast<std::size_t>(n - i) <= best.size()) return;
    if (i == n) {
      best = cur;
      return;
    }
    if (!blocked[i]) {
      std::vector<int> newly;
      for (int j = i + 1; j < n; ++j)
        if (conflict[i][j] && !blocked[j]) {
          blocked[j] = true;
          newly.push_back(j);
        }
      cur.push_back(i);
      rec(i + 1, blocked);
      cur.pop_back();
      for (int j : newly) blocked[j] = false;
    }
    rec(i + 1, blocked);
  };
  std::vector<bool> blocked(n, false);
  rec(0, blocked);
  return best;
}

}  // namespace

RefineResult refine_cover_spqr(const Graph& h, const SurfaceEmbedding& e, const FaceCover& cover, int g) {
  if (!is_face_cover(e, cover)) throw GraphError("refine_cover_spqr: not a face cover");
  RefineResult out;
  FaceData fd = e.faces();

  // minimize: drop faces from the back while the rest still covers
  std::vector<int> cur = cover.faces;
  std::sort(cur.begin(), cur.end());
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  for (int i = static_cast<int>(cur.size()) - 1; i >= 0; --i) {
    FaceCover t{cur, cover.covered};
    t.faces.erase(t.faces.begin() + i);
    if (is_face_cover(e, t)) {
      cur = t.faces;
      out.minimized = true;
    }
  }
  out.input_size = cur.size();
  auto finish = [&](std::vector<int> fs) {
    out.faces = std::move(fs);
    out.constant = out.faces.empty()
                       ? 0
                       : static_cast<double>(out.input_size) /
                             (static_cast<double>(out.faces.size()) * std::max(g, 1));
    return out;
  };
  if (pairwise_one_shared(e, cur)) {
    out.edge_disjoint = cur.size();
    return finish(cur);
  }

  std::map<int, VertexSet> fv;
  std::map<int, EdgeSet> fe;
  for (int f : cur) {
    fv[f] = face_vertices(fd.faces[f]);
    fe[f] = face_edges(fd.faces[f]);
  }
  // pairwise edge-disjoint subset
  std::vector<std::vector<bool>> conflict(cur.size(), std::vector<bool>(cur.size(), false));
  for (std::size_t i = 0; i < cur.size(); ++i)
    for (std::size_t j = i + 1; j < cur.size(); ++j)
      for (EdgeId x : fe[cur[i]])
        if (fe[cur[j]].count(x)) {
          conflict[i][j] = conflict[j][i] = true;
          break;
        }
  std::vector<int> f0;
  for (int i : max_independent(conflict)) f0.push_back(cur[i]);
  out.edge_disjoint = f0.size();

  std::set<int> alive(f0.begin(), f0.end()), active(f0.begin(), f0.end());
  auto del = [&](int f, int to) {
    alive.erase(f);
    active.erase(f);
    out.charges[to].push_back(f);
    ++out.charged_away;
  };

  SpqrTree t = spqr_decompose(h);
  int n = static_cast<int>(t.nodes.size());
  std::vector<int> parent(n, -2), order;
  std::vector<EdgeId> up_virtual(n, -1);
  parent[0] = -1;
  std::deque<int> q{0};
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    order.push_back(x);
    for (EdgeId v : t.nodes[x].virtuals) {
      auto [a, b] = t.pairing.at(v);
      int y = a == x ? b : a;
      if (parent[y] != -2) continue;
      parent[y] = x;
      up_virtual[y] = v;
      q.push_back(y);
    }
  }
  std::vector<EdgeSet> sub(n);
  for (int i = n - 1; i >= 0; --i) {
    int x = order[i];
    for (EdgeId id : t.nodes[x].skeleton.edges())
      if (!t.is_virtual(id)) sub[x].insert(id);
    if (parent[x] >= 0) sub[parent[x]].insert(sub[x].begin(), sub[x].end());
  }
  auto touches = [&](int f, const EdgeSet& es) {
    for (EdgeId x : fe[f])
      if (es.count(x)) return true;
    return false;
  };
  auto outside = [&](int f, const EdgeSet& es) {
    for (EdgeId x : fe[f])
      if (!es.count(x)) return true;
    return false;
  };

  for (int i = n - 1; i >= 0; --i) {
    int v = order[i];
    std::vector<int> fv_active;
    for (int f : active)
      if (touches(f, sub[v])) fv_active.push_back(f);
    // R: active faces reaching past the separation pair to the parent side
    std::set<int> R;
    if (parent[v] >= 0)
      for (int f : fv_active)
        if (outside(f, sub[v])) R.insert(f);
    for (int c : t.adj[v]) {
      if (c == parent[v]) continue;
      std::vector<int> Q;
      for (int f : fv_active)
        if (alive.count(f) && touches(f, sub[c])) Q.push_back(f);
      if (Q.empty()) continue;
      std::vector<int> inR;
      for (int f : Q)
        if (R.count(f)) inR.push_back(f);
      if (inR.empty()) {
        int keep = Q[0];
        active.erase(keep);
        for (std::size_t k = 1; k < Q.size(); ++k) del(Q[k], keep);
      } else if (inR.size() == 1 && Q.size() > 1) {
        int gone = inR[0];
        int keep = Q[0] == gone ? Q[1] : Q[0];
        for (int f : Q) active.erase(f);
        del(gone, keep);
        for (int f : Q)
          if (f != gone && f != keep && alive.count(f)) del(f, keep);
      }
    }
    if (!R.empty()) {
      const Edge& sep = t.nodes[v].skeleton.edge(up_virtual[v]);
      std::vector<int> Z;
      for (int f : fv_active)
        if (alive.count(f) && !R.count(f) && fv[f].count(sep.u) && fv[f].count(sep.v)) Z.push_back(f);
      if (!Z.empty()) {
        int keep = Z[0];
        for (int f : R) active.erase(f);
        for (int f : Z) active.erase(f);
        for (std::size_t k = 1; k < Z.size(); ++k) del(Z[k], keep);
      }
    }
  }

  // the charging pass leaves pairs meeting at a vertex pair that spans two
  // tree nodes; a greedy pass makes the predicate exact
  std::vector<int> kept;
  for (int f : alive) {
    bool ok = true;
    for (int k : kept) {
      int shared = 0;
      for (VertexId x : fv[f])
        if (fv[k].count(x)) ++shared;
      if (shared > 1) ok = false;
    }
    if (ok)
      kept.push_back(f);
    else
      ++out.filtered;
  }
  return finish(kept);
}

}  // namespace genuskit
