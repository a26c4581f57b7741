#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "genuskit/decompositions.hpp"
#include "genuskit/face_cover.hpp"
#include "genuskit/planar.hpp"

namespace genuskit {

VertexSet apex_neighbours(const ApexInstance& inst, const VertexSet& s) {
  VertexSet out;
  for (VertexId v : s)
    if (inst.graph.has_vertex(v))
      for (EdgeId e : inst.graph.incident(v)) {
        VertexId w = inst.graph.other(e, v);
        if (inst.apices.count(w) && !s.count(w)) out.insert(w);
      }
  return out;
}

PathRef path_from_vertices(const Graph& h, const std::vector<VertexId>& vs) {
  PathRef p;
  p.vertices = vs;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    auto es = h.edges_between(vs[i], vs[i + 1]);
    if (es.empty())
      throw GraphError("path_from_vertices: no edge " + std::to_string(vs[i]) + "-" + std::to_string(vs[i + 1]));
    p.edges.push_back(*std::min_element(es.begin(), es.end()));
  }
  return p;
}

bool is_path_in(const Graph& h, const PathRef& p) {
  if (p.vertices.empty() || p.edges.size() + 1 != p.vertices.size()) return false;
  VertexSet seen;
  for (VertexId v : p.vertices)
    if (!h.has_vertex(v) || !seen.insert(v).second) return false;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (!h.has_edge(p.edges[i])) return false;
    const Edge& e = h.edge(p.edges[i]);
    if (std::minmax(e.u, e.v) != std::minmax(p.vertices[i], p.vertices[i + 1])) return false;
  }
  return true;
}

namespace {

Verdict fail(std::string s) { return {false, std::move(s)}; }

// the H endpoint of an apex edge
VertexId h_end(const ApexInstance& inst, EdgeId e) {
  const Edge& ed = inst.graph.edge(e);
  return inst.apices.count(ed.u) ? ed.v : ed.u;
}

bool is_apex_edge(const ApexInstance& inst, EdgeId e) {
  if (!inst.graph.has_edge(e)) return false;
  const Edge& ed = inst.graph.edge(e);
  return inst.apices.count(ed.u) != inst.apices.count(ed.v);
}

// apex edges at an H vertex, grouped by apex
std::map<VertexId, std::vector<EdgeId>> apex_edges_at(const ApexInstance& inst, VertexId v) {
  std::map<VertexId, std::vector<EdgeId>> out;
  for (EdgeId e : inst.graph.incident(v)) {
    VertexId w = inst.graph.other(e, v);
    if (inst.apices.count(w)) out[w].push_back(e);
  }
  return out;
}

EdgeSet all_apex_edges(const ApexInstance& inst) {
  EdgeSet out;
  for (EdgeId e : inst.graph.edges())
    if (is_apex_edge(inst, e)) out.insert(e);
  return out;
}

}  // namespace

Verdict is_coupled(const ApexInstance& inst, const CoupledSet& c) {
  if (!is_path_in(inst.planar_piece, c.path)) return fail("not a path of H");
  if (!inst.apices.count(c.x1)) return fail("x1 not an apex");
  if (c.x2 != -1 && (!inst.apices.count(c.x2) || c.x2 == c.x1)) return fail("bad apex pair");
  VertexSet pv(c.path.vertices.begin(), c.path.vertices.end());
  for (EdgeId e : c.edges) {
    if (!inst.graph.has_edge(e)) return fail("unknown edge " + std::to_string(e));
    const Edge& ed = inst.graph.edge(e);
    bool fwd = pv.count(ed.u) && (ed.v == c.x1 || ed.v == c.x2);
    bool bwd = pv.count(ed.v) && (ed.u == c.x1 || ed.u == c.x2);
    if (!fwd && !bwd) return fail("edge " + std::to_string(e) + " not between the path and the pair");
  }
  for (std::size_t i = 1; i + 1 < c.path.vertices.size(); ++i) {
    VertexId v = c.path.vertices[i];
    for (EdgeId e : inst.graph.incident(v)) {
      VertexId w = inst.graph.other(e, v);
      if ((w == c.x1 || w == c.x2) && !c.edges.count(e))
        return fail("internal vertex " + std::to_string(v) + " misses edge " + std::to_string(e));
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Coupled partitions. One pass over the path; the state is the apex pair of
// the part running along the next path edge (or none). Apices left over at
// a vertex go to single-vertex parts, two apices each.

namespace {

using Mask = std::uint64_t;

int half_up(Mask m) { return (std::popcount(m) + 1) / 2; }

CoupledPartition coupled_core(const ApexInstance& inst, const PathRef& p, const std::vector<VertexId>& apx,
                              const EdgeSet* target) {
  if (!is_path_in(inst.planar_piece, p)) throw GraphError("coupled decomposition: not a path of H");
  if (apx.size() > 60) throw GraphError("coupled decomposition: too many apices");
  CoupledPartition out;
  const std::size_t n = p.vertices.size();
  const std::size_t a = apx.size();
  std::map<VertexId, int> idx;
  for (std::size_t j = 0; j < a; ++j) idx[apx[j]] = static_cast<int>(j);

  // per vertex: apex index -> edges to cover; need and forbid masks
  std::vector<std::map<int, std::vector<EdgeId>>> cover(n);
  std::vector<Mask> need(n, 0), forbid(n, 0);
  std::size_t target_seen = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (auto& [x, es] : apex_edges_at(inst, p.vertices[i])) {
      auto it = idx.find(x);
      if (it == idx.end()) continue;
      for (EdgeId e : es) {
        if (!target || target->count(e)) {
          cover[i][it->second].push_back(e);
          need[i] |= Mask{1} << it->second;
          ++target_seen;
        } else {
          forbid[i] |= Mask{1} << it->second;
        }
      }
    }
  if (target && target_seen != target->size())
    throw GraphError("coupled decomposition: target has edges off the path");
  if (a == 0 || target_seen == 0) return out;

  std::vector<std::pair<int, int>> pairs{{-1, -1}};  // state 0 = no part
  if (a == 1) {
    pairs.push_back({0, -1});
  } else {
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = i + 1; j < a; ++j) pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
  }
  const std::size_t S = pairs.size();
  std::vector<Mask> pm(S, 0);
  for (std::size_t s = 1; s < S; ++s) {
    pm[s] |= Mask{1} << pairs[s].first;
    if (pairs[s].second >= 0) pm[s] |= Mask{1} << pairs[s].second;
  }

  const int INF = std::numeric_limits<int>::max() / 2;
  struct Back {
    std::size_t from = 0;
    bool cont = false;
  };
  std::vector<std::vector<int>> dp(n, std::vector<int>(S, INF));
  std::vector<std::vector<Back>> back(n, std::vector<Back>(S));
  for (std::size_t i = 0; i < n; ++i) {
    bool last = i + 1 == n;
    for (std::size_t sl = 0; sl < S; ++sl) {
      if (i == 0 ? sl != 0 : dp[i - 1][sl] >= INF) continue;
      int base = i == 0 ? 0 : dp[i - 1][sl];
      for (std::size_t sr = 0; sr < (last ? 1 : S); ++sr) {
        int c = base + (sr ? 1 : 0) + half_up(need[i] & ~(pm[sl] | pm[sr]));
        if (c < dp[i][sr]) {
          dp[i][sr] = c;
          back[i][sr] = {sl, false};
        }
      }
      if (sl && !last && !(pm[sl] & forbid[i])) {
        int c = base + half_up(need[i] & ~pm[sl]);
        if (c < dp[i][sl]) {
          dp[i][sl] = c;
          back[i][sl] = {sl, true};
        }
      }
    }
  }

  std::vector<std::size_t> st(n);
  std::vector<bool> cont(n);
  std::size_t s = 0;
  for (std::size_t i = n; i-- > 0;) {
    st[i] = s;
    cont[i] = back[i][s].cont;
    s = back[i][s].from;
  }

  auto apex_of = [&](int j) { return j < 0 ? VertexId{-1} : apx[j]; };
  auto new_part = [&](std::size_t state) {
    CoupledSet c;
    c.x1 = apex_of(pairs[state].first);
    c.x2 = apex_of(pairs[state].second);
    out.parts.push_back(std::move(c));
    return out.parts.size() - 1;
  };
  auto give = [&](std::size_t part, std::size_t i, Mask m) {
    for (auto& [j, es] : cover[i])
      if (m >> j & 1) out.parts[part].edges.insert(es.begin(), es.end());
  };
  std::size_t open = 0;
  for (std::size_t i = 0; i < n; ++i) {
    VertexId v = p.vertices[i];
    std::size_t sl = i ? st[i - 1] : 0, sr = st[i];
    Mask rest;
    if (cont[i]) {
      out.parts[open].path.vertices.push_back(v);
      give(open, i, pm[sl]);
      rest = need[i] & ~pm[sl];
    } else {
      if (sl) {
        out.parts[open].path.vertices.push_back(v);
        give(open, i, need[i] & pm[sl]);
      }
      if (sr) {
        open = new_part(sr);
        out.parts[open].path.vertices.push_back(v);
        give(open, i, need[i] & pm[sr] & ~pm[sl]);
      }
      rest = need[i] & ~(pm[sl] | pm[sr]);
    }
    std::vector<int> left;
    for (std::size_t j = 0; j < a; ++j)
      if (rest >> j & 1) left.push_back(static_cast<int>(j));
    for (std::size_t q = 0; q < left.size(); q += 2) {
      int j1 = left[q];
      int j2 = q + 1 < left.size() ? left[q + 1] : (a == 1 ? -1 : (j1 == 0 ? 1 : 0));
      CoupledSet c;
      c.x1 = std::min(apex_of(j1), j2 < 0 ? apex_of(j1) : apex_of(j2));
      c.x2 = j2 < 0 ? -1 : std::max(apex_of(j1), apex_of(j2));
      c.path.vertices = {v};
      Mask m = (Mask{1} << j1) | (q + 1 < left.size() ? Mask{1} << j2 : 0);
      out.parts.push_back(std::move(c));
      give(out.parts.size() - 1, i, m);
    }
    if (sr) out.parts[open].path.edges.push_back(p.edges[i]);
  }
  out.k = static_cast<int>(out.parts.size());
  if (out.k != dp[n - 1][0]) throw std::logic_error("coupled decomposition: reconstruction mismatch");
  return out;
}

}  // namespace

CoupledPartition interleaving_decompose(const ApexInstance& inst, const PathRef& p,
                                        const std::array<VertexId, 3>& triple) {
  VertexSet t(triple.begin(), triple.end());
  if (t.size() != 3) throw GraphError("interleaving_decompose: apices not distinct");
  for (VertexId x : t)
    if (!inst.apices.count(x)) throw GraphError("interleaving_decompose: " + std::to_string(x) + " not an apex");
  return coupled_core(inst, p, std::vector<VertexId>(t.begin(), t.end()), nullptr);
}

CoupledPartition coupled_decompose_full(const ApexInstance& inst, const PathRef& p) {
  return coupled_core(inst, p, std::vector<VertexId>(inst.apices.begin(), inst.apices.end()), nullptr);
}

CoupledPartition coupled_decompose_edges(const ApexInstance& inst, const PathRef& p, const EdgeSet& target) {
  for (EdgeId e : target)
    if (!is_apex_edge(inst, e)) throw GraphError("coupled_decompose_edges: " + std::to_string(e) + " is no apex edge");
  return coupled_core(inst, p, std::vector<VertexId>(inst.apices.begin(), inst.apices.end()), &target);
}

// ---------------------------------------------------------------------------
// Kissing decomposition

bool is_face_subpath(const SurfaceEmbedding& d, int face, const PathRef& p) {
  FaceData fd = d.faces();
  if (face < 0 || face >= static_cast<int>(fd.faces.size()) || p.vertices.empty()) return false;
  const FaceWalk& w = fd.faces[face];
  if (p.edges.empty()) return face_vertices(w).count(p.front()) > 0;
  const std::size_t L = w.length(), k = p.edges.size();
  if (k > L) return false;
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<VertexId> vs = p.vertices;
    std::vector<EdgeId> es = p.edges;
    if (dir) {
      std::reverse(vs.begin(), vs.end());
      std::reverse(es.begin(), es.end());
    }
    for (std::size_t s = 0; s < L; ++s) {
      bool ok = true;
      for (std::size_t q = 0; q < k && ok; ++q)
        ok = dart_edge(w.darts[(s + q) % L]) == es[q] && w.vertices[(s + q) % L] == vs[q];
      if (ok && w.vertices[(s + k) % L] == vs[k]) return true;
    }
  }
  return false;
}

namespace {

VertexSet ends_of(const PathRef& p) { return {p.front(), p.back()}; }

// Vertices strictly inside the disks bounded by the closed walk a + b, with
// face 0 taken as the outer face.
VertexSet inside_walk(const SurfaceEmbedding& d, const PathRef& a, const PathRef& b) {
  std::map<EdgeId, int> times;
  for (EdgeId e : a.edges) ++times[e];
  for (EdgeId e : b.edges) ++times[e];
  FaceData fd = d.faces();
  std::vector<int> uf(fd.faces.size());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
  for (EdgeId e : d.graph.edges()) {
    auto it = times.find(e);
    if (it != times.end() && it->second % 2) continue;
    uf[find(fd.flag_face.at(4 * e))] = find(fd.flag_face.at(4 * e + 1));
  }
  VertexSet on(a.vertices.begin(), a.vertices.end());
  on.insert(b.vertices.begin(), b.vertices.end());
  VertexSet out;
  if (fd.faces.empty()) return out;
  int outer = find(0);
  for (VertexId v : d.graph.vertices()) {
    if (on.count(v) || d.graph.degree(v) == 0) continue;
    Dart x = d.rot.rotation.at(v).front();
    if (find(fd.flag_face.at(2 * x)) != outer) out.insert(v);
  }
  return out;
}

}  // namespace

int kissing_case(const ApexInstance& inst, const SurfaceEmbedding& d, const CoupledSet& a, const CoupledSet& b) {
  VertexSet va(a.path.vertices.begin(), a.path.vertices.end());
  VertexSet shared;
  for (VertexId v : b.path.vertices)
    if (va.count(v)) shared.insert(v);
  if (shared.empty()) return 1;
  VertexSet ea = ends_of(a.path), eb = ends_of(b.path);
  if (shared.size() == 1 && ea.count(*shared.begin()) && eb.count(*shared.begin())) return 2;
  if (ea.size() != 2 || ea != eb) return 0;
  VertexSet touch = inside_walk(d, a.path, b.path);
  touch.insert(a.path.vertices.begin(), a.path.vertices.end());
  touch.insert(b.path.vertices.begin(), b.path.vertices.end());
  for (VertexId v : touch)
    for (auto& [x, es] : apex_edges_at(inst, v))
      for (EdgeId e : es)
        if (!a.edges.count(e) && !b.edges.count(e)) return 0;
  return 3;
}

namespace {

// Split a piece at internal path positions; an apex edge at a cut vertex
// stays with the part ending there.
std::vector<KissingPiece> cut_piece(const ApexInstance& inst, const KissingPiece& kp, std::vector<std::size_t> pos) {
  const PathRef& p = kp.set.path;
  std::sort(pos.begin(), pos.end());
  pos.insert(pos.begin(), 0);
  pos.push_back(p.vertices.size() - 1);
  std::vector<KissingPiece> out;
  for (std::size_t j = 0; j + 1 < pos.size(); ++j) {
    KissingPiece q{kp.rank, {}};
    q.set.x1 = kp.set.x1;
    q.set.x2 = kp.set.x2;
    q.set.path.vertices.assign(p.vertices.begin() + pos[j], p.vertices.begin() + pos[j + 1] + 1);
    q.set.path.edges.assign(p.edges.begin() + pos[j], p.edges.begin() + pos[j + 1]);
    out.push_back(std::move(q));
  }
  std::map<VertexId, std::size_t> at;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) at[p.vertices[i]] = i;
  for (EdgeId e : kp.set.edges) {
    std::size_t i = at.at(h_end(inst, e));
    std::size_t j = 0;
    while (pos[j + 1] < i) ++j;
    out[j].set.edges.insert(e);
  }
  return out;
}

std::vector<KissingPiece> to_singletons(const ApexInstance& inst, const KissingPiece& kp) {
  std::vector<KissingPiece> out;
  for (VertexId v : kp.set.path.vertices) {
    KissingPiece q{kp.rank, {}};
    q.set.x1 = kp.set.x1;
    q.set.x2 = kp.set.x2;
    q.set.path.vertices = {v};
    for (EdgeId e : kp.set.edges)
      if (h_end(inst, e) == v) q.set.edges.insert(e);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

KissingDecomposition kissing_decomposition(const ApexInstance& inst) {
  const Graph& h = inst.planar_piece;
  if (!is_biconnected(h)) throw GraphError("kissing_decomposition: H is not 2-connected");
  KissingDecomposition out;
  out.merge_slack = inst.apices.empty() ? 0 : inst.apices.size() - 1;
  EdgeSet ae = all_apex_edges(inst);
  VertexSet u;
  for (EdgeId e : ae) u.insert(h_end(inst, e));
  if (u.empty()) {
    out.drawing = inst.stored_drawing();
    return out;
  }
  auto cov = min_face_cover_over_embeddings(h, u);
  out.drawing = cov.embedding;
  out.faces = cov.cover.faces;
  out.cover_size = out.faces.size();
  FaceData fd = out.drawing.faces();

  std::vector<VertexSet> fv;
  for (int f : out.faces) fv.push_back(face_vertices(fd.faces[f]));
  std::map<VertexId, int> rank_of;
  for (VertexId v : u)
    for (std::size_t i = 0; i < fv.size(); ++i)
      if (fv[i].count(v)) {
        rank_of[v] = static_cast<int>(i);
        break;
      }

  std::vector<KissingPiece> work;
  for (std::size_t i = 0; i < out.faces.size(); ++i) {
    const FaceWalk& w = fd.faces[out.faces[i]];
    const std::size_t L = w.length();
    const std::size_t b[4] = {0, L / 3, 2 * L / 3, L};
    std::vector<PathRef> qs;
    for (int j = 0; j < 3; ++j) {
      if (b[j] == b[j + 1]) continue;
      PathRef q;
      for (std::size_t s = b[j]; s < b[j + 1]; ++s) {
        q.vertices.push_back(w.vertices[s]);
        q.edges.push_back(dart_edge(w.darts[s]));
      }
      q.vertices.push_back(w.vertices[b[j + 1] % L]);
      if (!is_path_in(h, q)) throw std::logic_error("kissing_decomposition: face is not a cycle");
      qs.push_back(std::move(q));
    }
    std::vector<EdgeSet> r(qs.size());
    for (EdgeId e : ae) {
      VertexId v = h_end(inst, e);
      if (rank_of.at(v) != static_cast<int>(i)) continue;
      for (std::size_t j = 0; j < qs.size(); ++j)
        if (std::find(qs[j].vertices.begin(), qs[j].vertices.end(), v) != qs[j].vertices.end()) {
          r[j].insert(e);
          break;
        }
    }
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (r[j].empty()) continue;
      for (auto& c : coupled_decompose_edges(inst, qs[j], r[j]).parts)
        work.push_back({static_cast<int>(i), std::move(c)});
    }
  }

  // Cut until every two pieces meet in at most one vertex, an endpoint of both.
  for (;;) {
    ++out.cut_rounds;
    std::erase_if(work, [](const KissingPiece& k) { return k.set.edges.empty(); });
    std::map<VertexId, int> occ;
    VertexSet ends;
    for (auto& k : work) {
      for (VertexId v : k.set.path.vertices) ++occ[v];
      ends.insert(k.set.path.front());
      ends.insert(k.set.path.back());
    }
    bool changed = false;
    std::vector<KissingPiece> next;
    for (auto& k : work) {
      std::vector<std::size_t> pos;
      for (std::size_t q = 1; q + 1 < k.set.path.vertices.size(); ++q) {
        VertexId v = k.set.path.vertices[q];
        if (ends.count(v) || occ[v] > 1) pos.push_back(q);
      }
      if (pos.empty()) {
        next.push_back(std::move(k));
      } else {
        changed = true;
        for (auto& c : cut_piece(inst, k, pos)) next.push_back(std::move(c));
      }
    }
    work = std::move(next);
    if (changed) continue;
    for (std::size_t i = 0; i < work.size() && !changed; ++i) {
      VertexSet vi(work[i].set.path.vertices.begin(), work[i].set.path.vertices.end());
      for (std::size_t j = i + 1; j < work.size() && !changed; ++j) {
        int shared = 0;
        for (VertexId v : work[j].set.path.vertices) shared += static_cast<int>(vi.count(v));
        if (shared < 2) continue;
        changed = true;
        std::size_t victim = work[i].set.path.edges.size() >= 2 ? i : j;
        std::vector<KissingPiece> parts = work[victim].set.path.edges.size() >= 2
                                              ? cut_piece(inst, work[victim], {1})
                                              : to_singletons(inst, work[victim]);
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(victim));
        work.insert(work.begin() + static_cast<std::ptrdiff_t>(victim), parts.begin(), parts.end());
      }
    }
    if (!changed) break;
  }
  std::stable_sort(work.begin(), work.end(), [](const KissingPiece& a, const KissingPiece& b) { return a.rank < b.rank; });
  out.pieces = std::move(work);
  return out;
}

namespace {

Verdict exact_partition(const ApexInstance& inst, const std::vector<const EdgeSet*>& parts) {
  std::map<EdgeId, int> seen;
  for (auto* p : parts)
    for (EdgeId e : *p) ++seen[e];
  EdgeSet all = all_apex_edges(inst);
  for (auto& [e, c] : seen) {
    if (!all.count(e)) return fail("edge " + std::to_string(e) + " is not an apex edge");
    if (c != 1) return fail("edge " + std::to_string(e) + " used " + std::to_string(c) + " times");
  }
  if (seen.size() != all.size()) return fail("apex edges left uncovered");
  return {};
}

}  // namespace

Verdict validate_kissing(const ApexInstance& inst, const KissingDecomposition& k) {
  std::vector<const EdgeSet*> parts;
  for (auto& p : k.pieces) parts.push_back(&p.set.edges);
  if (auto v = exact_partition(inst, parts); !v) return v;
  FaceData fd = k.drawing.faces();
  VertexSet covered;
  for (int f : k.faces) {
    if (f < 0 || f >= static_cast<int>(fd.faces.size())) return fail("face index out of range");
    auto fv = face_vertices(fd.faces[f]);
    covered.insert(fv.begin(), fv.end());
  }
  for (EdgeId e : all_apex_edges(inst))
    if (!covered.count(h_end(inst, e))) return fail("faces miss vertex " + std::to_string(h_end(inst, e)));
  std::map<EdgeId, int> owner_rank;
  std::map<VertexId, int> min_rank;
  for (std::size_t i = 0; i < k.pieces.size(); ++i) {
    const auto& p = k.pieces[i];
    if (p.rank < 0 || p.rank >= static_cast<int>(k.faces.size())) return fail("rank out of range");
    if (auto v = is_coupled(inst, p.set); !v) return fail("piece " + std::to_string(i) + ": " + v.why);
    if (!is_face_subpath(k.drawing, k.faces[p.rank], p.set.path))
      return fail("piece " + std::to_string(i) + " leaves its face");
    for (EdgeId e : p.set.edges) owner_rank[e] = p.rank;
    for (VertexId v : p.set.path.vertices) {
      auto it = min_rank.find(v);
      if (it == min_rank.end() || p.rank < it->second) min_rank[v] = p.rank;
    }
  }
  // greedy priority: a vertex's apex edges all sit with its earliest face
  for (auto& [v, r] : min_rank)
    for (auto& [x, es] : apex_edges_at(inst, v))
      for (EdgeId e : es)
        if (owner_rank.at(e) != r) return fail("vertex " + std::to_string(v) + " has an edge on a later face");
  for (std::size_t i = 0; i < k.pieces.size(); ++i)
    for (std::size_t j = i + 1; j < k.pieces.size(); ++j)
      if (!kissing_case(inst, k.drawing, k.pieces[i].set, k.pieces[j].set))
        return fail("pieces " + std::to_string(i) + " and " + std::to_string(j) + " are not kissing");
  return {};
}

// ---------------------------------------------------------------------------
// Centipedes and butterflies

Verdict is_centipede(const ApexInstance& inst, const SurfaceEmbedding& d, int face, const CoupledSet& c) {
  if (auto v = is_coupled(inst, c); !v) return v;
  if (!is_face_subpath(d, face, c.path)) return fail("path is not a subpath of face " + std::to_string(face));
  return {};
}

Verdict is_butterfly(const ApexInstance& inst, const Butterfly& b) {
  const Graph& h = inst.planar_piece;
  if (!h.has_vertex(b.s) || !h.has_vertex(b.t)) return fail("endpoints not in H");
  if (!inst.apices.count(b.x1) || (b.x2 != -1 && (!inst.apices.count(b.x2) || b.x2 == b.x1)))
    return fail("bad apex pair");
  VertexSet st{b.s, b.t};
  VertexSet inner;
  for (VertexId v : b.vertices)
    if (!st.count(v)) inner.insert(v);
  for (VertexId v : st)
    if (!b.vertices.count(v)) return fail("C misses an endpoint");
  // C must be one component of H cut along s and t
  if (inner.empty()) {
    if (b.s == b.t) {
      if (!b.edges.empty()) return fail("single-vertex C with edges");
    } else if (b.edges.size() != 1 || !h.has_edge(*b.edges.begin()) ||
               std::minmax(h.edge(*b.edges.begin()).u, h.edge(*b.edges.begin()).v) != std::minmax(b.s, b.t)) {
      return fail("C without inner vertices must be one s-t edge");
    }
  } else {
    Graph rest = remove_vertices(h, st);
    if (reach_within(rest, *inner.begin(), [&] {
          auto vs = rest.vertices();
          return VertexSet(vs.begin(), vs.end());
        }()) != inner)
      return fail("inner vertices are not one component of H - {s,t}");
    EdgeSet want;
    VertexSet attach;
    for (VertexId v : inner)
      for (EdgeId e : h.incident(v)) {
        want.insert(e);
        VertexId w = h.other(e, v);
        if (st.count(w)) attach.insert(w);
      }
    if (want != b.edges) return fail("E(C) is not the component's edge set");
    if (attach != st) return fail("C does not reach both endpoints");
  }
  for (EdgeId e : b.r) {
    if (!inst.graph.has_edge(e)) return fail("unknown edge in R");
    const Edge& ed = inst.graph.edge(e);
    bool ok = (b.vertices.count(ed.u) && (ed.v == b.x1 || ed.v == b.x2)) ||
              (b.vertices.count(ed.v) && (ed.u == b.x1 || ed.u == b.x2));
    if (!ok) return fail("R edge " + std::to_string(e) + " not between C and the pair");
  }
  for (VertexId v : inner)
    for (auto& [x, es] : apex_edges_at(inst, v))
      for (EdgeId e : es)
        if (!b.r.count(e)) return fail("inner vertex " + std::to_string(v) + " has apex edge outside R");
  // s, t and the R-endpoints on one face: planar with an extra vertex on all of them
  Graph c;
  for (VertexId v : b.vertices) c.add_vertex(v);
  for (EdgeId e : b.edges) c.add_edge(e, h.edge(e).u, h.edge(e).v);
  VertexId aux = std::max(inst.graph.max_vertex_id(), c.max_vertex_id()) + 1;
  c.add_vertex(aux);
  VertexSet rim = st;
  for (EdgeId e : b.r) rim.insert(h_end(inst, e));
  for (VertexId v : rim) c.add_edge(aux, v);
  if (!is_planar(c)) return fail("no drawing with s, t and R-endpoints on one face");
  return {};
}

DecompositionReport centipede_butterfly(const ApexInstance& inst) {
  KissingDecomposition k = kissing_decomposition(inst);
  DecompositionReport r;
  r.drawing = k.drawing;
  long singles = 0;
  for (auto& p : k.pieces) {
    Piece q;
    q.kind = Piece::Kind::Centipede;
    q.face = k.faces[p.rank];
    q.centipede = p.set;
    singles += p.set.path.edges.empty();
    r.pieces.push_back(std::move(q));
  }
  // Cut pieces never share an edge, so every one is a centipede.
  r.counts["faces"] = static_cast<long>(k.cover_size);
  r.counts["centipedes"] = static_cast<long>(r.pieces.size());
  r.counts["butterflies"] = 0;
  r.counts["single_vertex_pieces"] = singles;
  r.counts["cut_rounds"] = static_cast<long>(k.cut_rounds);
  r.bounds["faces"] = {static_cast<double>(k.cover_size), "O(g^2 + |X|^2)"};
  r.bounds["merge_slack"] = {static_cast<double>(k.merge_slack), "|X| - 1"};
  r.bounds["pieces"] = {static_cast<double>(r.pieces.size()), "O(g^9 |X|^6 + g^3 |X|^12)"};
  return r;
}

Verdict validate_pieces(const ApexInstance& inst, const DecompositionReport& r) {
  std::vector<const EdgeSet*> parts;
  struct Shape {
    VertexSet vs, ends;
    EdgeSet es;
  };
  std::vector<Shape> shapes;
  for (std::size_t i = 0; i < r.pieces.size(); ++i) {
    const Piece& p = r.pieces[i];
    parts.push_back(&p.apex_edges());
    Shape s;
    if (p.kind == Piece::Kind::Centipede) {
      if (auto v = is_centipede(inst, r.drawing, p.face, p.centipede); !v)
        return fail("piece " + std::to_string(i) + ": " + v.why);
      s.vs.insert(p.centipede.path.vertices.begin(), p.centipede.path.vertices.end());
      s.ends = ends_of(p.centipede.path);
      s.es.insert(p.centipede.path.edges.begin(), p.centipede.path.edges.end());
    } else {
      if (auto v = is_butterfly(inst, p.butterfly); !v) return fail("piece " + std::to_string(i) + ": " + v.why);
      s.vs = p.butterfly.vertices;
      s.ends = {p.butterfly.s, p.butterfly.t};
      s.es = p.butterfly.edges;
    }
    shapes.push_back(std::move(s));
  }
  if (auto v = exact_partition(inst, parts); !v) return v;
  for (std::size_t i = 0; i < shapes.size(); ++i)
    for (std::size_t j = i + 1; j < shapes.size(); ++j) {
      for (VertexId v : shapes[i].vs)
        if (shapes[j].vs.count(v) && !(shapes[i].ends.count(v) && shapes[j].ends.count(v)))
          return fail("pieces " + std::to_string(i) + " and " + std::to_string(j) + " meet at inner vertex " +
                      std::to_string(v));
      for (EdgeId e : shapes[i].es)
        if (shapes[j].es.count(e))
          return fail("pieces " + std::to_string(i) + " and " + std::to_string(j) + " share an edge");
    }
  return {};
}

std::string to_json(const DecompositionReport& r) {
  using nlohmann::json;
  json pieces = json::array();
  for (auto& p : r.pieces) {
    json j;
    if (p.kind == Piece::Kind::Centipede) {
      j["kind"] = "centipede";
      j["face"] = p.face;
      j["path"] = p.centipede.path.vertices;
      j["apices"] = {p.centipede.x1, p.centipede.x2};
    } else {
      j["kind"] = "butterfly";
      j["s"] = p.butterfly.s;
      j["t"] = p.butterfly.t;
      j["vertices"] = p.butterfly.vertices;
      j["apices"] = {p.butterfly.x1, p.butterfly.x2};
    }
    j["apex_edges"] = p.apex_edges();
    pieces.push_back(std::move(j));
  }
  json bounds = json::object();
  for (auto& [k, b] : r.bounds) bounds[k] = {{"measured", b.measured}, {"expression", b.expression}};
  json out{{"pieces", pieces}, {"counts", r.counts}, {"bounds", bounds}};
  return out.dump();
}

}  // namespace genuskit
