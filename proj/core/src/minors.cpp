#include "genuskit/minors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "genuskit/oracle.hpp"
#include "genuskit/planar.hpp"

namespace genuskit {

bool GridSpec::on_boundary(VertexId v) const {
  int i = row(v), j = col(v);
  return i == 0 || j == 0 || i == rows - 1 || j == cols - 1;
}

VertexSet GridSpec::boundary() const {
  VertexSet s;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (on_boundary(vertex(i, j))) s.insert(vertex(i, j));
  return s;
}

VertexSet GridSpec::interior() const {
  VertexSet s;
  for (int i = 1; i + 1 < rows; ++i)
    for (int j = 1; j + 1 < cols; ++j) s.insert(vertex(i, j));
  return s;
}

namespace {

void check_grid(const GridSpec& grid, const VertexSet& a, const char* who) {
  if (grid.rows < 2 || grid.cols < 1)
    throw GraphError(std::string(who) + ": grid needs at least two rows");
  for (VertexId v : a) {
    if (v < 0 || v >= static_cast<VertexId>(grid.rows) * grid.cols)
      throw GraphError(std::string(who) + ": vertex " + std::to_string(v) + " is not in the grid");
    if (grid.on_boundary(v))
      throw GraphError(std::string(who) + ": vertex " + std::to_string(v) + " is on the boundary");
  }
}

void must_verify(const Graph& host, const MinorMapping& m, const char* who) {
  MinorCheck c = verify_minor_mapping(host, m);
  if (!c.ok) throw std::logic_error(std::string(who) + ": witness fails (" + c.reason + "): " + c.detail);
}

// 1-based column J of the comb formulas
int col1(const GridSpec& grid, VertexId v) { return grid.col(v) + 1; }

}  // namespace

std::pair<VertexSet, VertexSet> grid_combs(const GridSpec& grid, int t) {
  // T: top row plus columns 1+t, 4+t, ... without the bottom row.
  // T': bottom row plus columns 3+t, 6+t, ... without the top row.
  VertexSet tree, prime;
  int last = grid.rows - 1;
  for (int j = 0; j < grid.cols; ++j) {
    tree.insert(grid.vertex(0, j));
    prime.insert(grid.vertex(last, j));
  }
  for (int jj = 1 + t; jj <= grid.cols; jj += 3)
    for (int i = 0; i < last; ++i) tree.insert(grid.vertex(i, jj - 1));
  for (int jj = 3 + t; jj <= grid.cols; jj += 3)
    for (int i = 1; i <= last; ++i) prime.insert(grid.vertex(i, jj - 1));
  return {tree, prime};
}

CombWitness k2r_in_grid(const GridSpec& grid, const VertexSet& a) {
  check_grid(grid, a, "k2r_in_grid");
  int best_t = 0;
  std::size_t best = 0;
  for (int t = 0; t < 3; ++t) {
    std::size_t n = std::count_if(a.begin(), a.end(), [&](VertexId v) { return col1(grid, v) % 3 == (2 + t) % 3; });
    if (n > best) best = n, best_t = t;
  }
  CombWitness w;
  w.t_star = best_t;
  std::tie(w.comb, w.comb_prime) = grid_combs(grid, best_t);
  int l = static_cast<int>(best);
  w.mapping.minor = complete_bipartite(2, std::max(l, 1));
  if (l == 0) w.mapping.minor.remove_vertex(2);
  w.mapping.branch_sets[0] = w.comb;
  w.mapping.branch_sets[1] = w.comb_prime;
  VertexId next = 2;
  for (VertexId v : a)
    if (col1(grid, v) % 3 == (2 + best_t) % 3) w.mapping.branch_sets[next++] = {v};
  must_verify(grid.graph(), w.mapping, "k2r_in_grid");
  return w;
}

Graph apex_grid(const GridSpec& grid, const VertexSet& a, VertexId apex) {
  check_grid(grid, a, "apex_grid");
  Graph g = grid.graph();
  if (g.has_vertex(apex)) throw GraphError("apex_grid: apex id " + std::to_string(apex) + " is a grid vertex");
  g.add_vertex(apex);
  for (VertexId v : a) g.add_edge(apex, v);
  return g;
}

MinorMapping k3r_in_apex_grid(const GridSpec& grid, const VertexSet& a, VertexId apex) {
  Graph host = apex_grid(grid, a, apex);
  CombWitness w = k2r_in_grid(grid, a);
  int l = w.l();
  MinorMapping m;
  m.minor = complete_bipartite(3, std::max(l, 1));
  if (l == 0) m.minor.remove_vertex(3);
  m.branch_sets[0] = w.comb;
  m.branch_sets[1] = w.comb_prime;
  m.branch_sets[2] = {apex};
  for (int i = 0; i < l; ++i) m.branch_sets[3 + i] = w.mapping.branch_sets.at(2 + i);
  must_verify(host, m, "k3r_in_apex_grid");
  return m;
}

bool is_flat(const Graph& g, const VertexSet& sub) {
  VertexSet in;
  for (VertexId v : sub)
    if (g.has_vertex(v)) in.insert(v);
  Graph gamma = induced_subgraph(g, in);
  if (!is_planar(gamma)) return false;
  VertexSet att;
  for (VertexId v : in)
    for (VertexId w : g.neighbors(v))
      if (!in.count(w)) {
        att.insert(v);
        break;
      }
  if (att.size() <= 1) return true;
  VertexId aux = std::max(g.max_vertex_id(), gamma.max_vertex_id()) + 1;
  gamma.add_vertex(aux);
  for (VertexId v : att) gamma.add_edge(aux, v);
  return is_planar(gamma);
}

namespace {

// sizes of the two sides if m is a connected simple complete bipartite graph
std::optional<std::pair<int, int>> complete_bipartite_sides(const Graph& m) {
  if (m.num_vertices() < 2 || !m.is_simple() || !is_connected(m)) return std::nullopt;
  std::map<VertexId, int> side;
  std::vector<VertexId> stack{m.vertices().front()};
  side[stack.back()] = 0;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : m.neighbors(v)) {
      auto [it, fresh] = side.emplace(w, 1 - side[v]);
      if (fresh) stack.push_back(w);
      else if (it->second == side[v]) return std::nullopt;
    }
  }
  int p = 0, q = 0;
  for (auto& [v, s] : side) (s ? q : p)++;
  if (m.num_edges() != static_cast<std::size_t>(p) * q) return std::nullopt;
  return std::pair{p, q};
}

}  // namespace

LowerBoundCertificate certify_lower_bound(const Graph& g, const MinorMapping& witness, int budget) {
  MinorCheck c = verify_minor_mapping(g, witness);
  if (!c.ok) throw GraphError("certify_lower_bound: witness fails verification (" + c.reason + "): " + c.detail);
  auto sides = complete_bipartite_sides(witness.minor);
  if (!sides || (sides->first != 3 && sides->second != 3))
    throw GraphError("certify_lower_bound: witness minor is not K_{3,r}");
  LowerBoundCertificate out;
  out.witness = witness;
  out.r = sides->first == 3 ? sides->second : sides->first;
  out.implied_bound = kmn_genus(3, out.r);
  out.budget = budget;
  out.exceeds = out.implied_bound > budget;
  out.verdict = out.exceeds ? "eg(G) > " + std::to_string(budget)
                            : "eg(G) >= " + std::to_string(out.implied_bound) + ", no verdict at budget " +
                                  std::to_string(budget);
  return out;
}

std::optional<MinorMapping> find_k3r_minor(const Graph& g) {
  std::vector<VertexId> cand;
  for (VertexId v : g.vertices())
    if (g.neighbors(v).size() >= 2) cand.push_back(v);
  std::optional<MinorMapping> best;
  int best_r = 0;
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      for (std::size_t k = j + 1; k < cand.size(); ++k) {
        VertexSet left{cand[i], cand[j], cand[k]};
        auto touches_all = [&](const VertexSet& s) {
          for (VertexId x : left) {
            bool hit = false;
            for (VertexId w : g.neighbors(x))
              if (s.count(w)) {
                hit = true;
                break;
              }
            if (!hit) return false;
          }
          return true;
        };
        // common neighbours first as singletons, then leftover components
        std::vector<VertexSet> right;
        VertexSet used = left;
        for (VertexId w : g.neighbors(cand[i]))
          if (!used.count(w) && g.adjacent(w, cand[j]) && g.adjacent(w, cand[k])) {
            right.push_back({w});
            used.insert(w);
          }
        for (const VertexSet& comp : connected_components(remove_vertices(g, used)))
          if (touches_all(comp)) right.push_back(comp);
        int r = static_cast<int>(right.size());
        if (r <= best_r) continue;
        best_r = r;
        MinorMapping m;
        m.minor = complete_bipartite(3, r);
        m.branch_sets[0] = {cand[i]};
        m.branch_sets[1] = {cand[j]};
        m.branch_sets[2] = {cand[k]};
        for (int q = 0; q < r; ++q) m.branch_sets[3 + q] = right[q];
        best = std::move(m);
      }
  if (best) must_verify(g, *best, "find_k3r_minor");
  return best;
}

VertexSet planarizing_set(const Graph& g) {
  VertexSet x;
  Graph cur = g;
  for (;;) {
    PlanarResult p = planar_embed(cur);
    if (p.planar) return x;
    const Graph& k = *p.kuratowski;
    VertexId pick = -1;
    std::size_t kd = 0, gd = 0;
    for (VertexId v : k.vertices()) {
      std::size_t a = k.degree(v), b = cur.degree(v);
      if (pick < 0 || a > kd || (a == kd && b > gd)) pick = v, kd = a, gd = b;
    }
    x.insert(pick);
    cur.remove_vertex(pick);
  }
}

namespace {

// Embeds the k x k grid as a subgraph of h (single-vertex branch sets),
// row-major backtracking. Returns phi indexed by i*k+j, empty on failure or
// when the node budget runs out.
std::vector<VertexId> find_grid(const Graph& h, int k, long budget, bool& exhausted) {
  std::vector<VertexId> phi(static_cast<std::size_t>(k) * k, -1);
  VertexSet used;
  long nodes = 0;
  exhausted = false;
  auto need = [k](int i, int j) {
    return 4 - (i == 0) - (j == 0) - (i == k - 1) - (j == k - 1);
  };
  std::function<bool(int)> go = [&](int p) -> bool {
    if (p == k * k) return true;
    if (++nodes > budget) {
      exhausted = true;
      return false;
    }
    int i = p / k, j = p % k;
    std::vector<VertexId> cands;
    if (j > 0) cands = h.neighbors(phi[p - 1]);
    else if (i > 0) cands = h.neighbors(phi[p - k]);
    else cands = h.vertices();
    for (VertexId v : cands) {
      if (used.count(v)) continue;
      if (static_cast<int>(h.neighbors(v).size()) < need(i, j)) continue;
      if (i > 0 && !h.adjacent(v, phi[p - k])) continue;
      phi[p] = v;
      used.insert(v);
      if (go(p + 1)) return true;
      used.erase(v);
      if (exhausted) return false;
    }
    phi[p] = -1;
    return false;
  };
  if (!go(0)) return {};
  return phi;
}

}  // namespace

FlatGridResult flat_grid_minor(const Graph& g, int budget, double c, long max_search_nodes) {
  FlatGridResult out;
  out.c = c;
  out.planarizing = planarizing_set(g);
  out.note = "planarizing set is heuristic, no size guarantee";

  // largest planar components first
  std::vector<VertexSet> comps = connected_components(remove_vertices(g, out.planarizing));
  std::stable_sort(comps.begin(), comps.end(), [](auto& a, auto& b) { return a.size() > b.size(); });
  std::vector<VertexId> phi;
  bool ran_out = false;
  for (int k = 6; k >= 3 && phi.empty(); --k)
    for (const VertexSet& comp : comps) {
      if (comp.size() < static_cast<std::size_t>(k) * k) continue;
      bool ex = false;
      phi = find_grid(induced_subgraph(g, comp), k, max_search_nodes, ex);
      ran_out |= ex;
      if (!phi.empty()) {
        out.grid_size = k;
        break;
      }
    }
  if (phi.empty()) {
    out.note += "; scale insufficient: no 3x3 grid found in a planar component";
    if (ran_out) out.note += " within the search budget";
    return out;
  }
  int k = out.grid_size;
  auto at = [&](int i, int j) { return phi[static_cast<std::size_t>(i) * k + j]; };

  // strip the boundary and tile the (k-2) x (k-2) interior
  long xs = static_cast<long>(out.planarizing.size());
  long h = xs == 0 ? 1 : static_cast<long>(std::ceil(c * std::max(budget, 1) * xs));
  int per_side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(h))));
  out.tile_size = (k - 2) / per_side;
  if (out.tile_size >= 1) {
    out.tiles = per_side * per_side;
    for (int a = 0; a < per_side; ++a)
      for (int b = 0; b < per_side; ++b) {
        VertexSet tile;
        bool touched = false;
        for (int i = 0; i < out.tile_size; ++i)
          for (int j = 0; j < out.tile_size; ++j) {
            VertexId v = at(1 + a * out.tile_size + i, 1 + b * out.tile_size + j);
            tile.insert(v);
            for (VertexId w : g.neighbors(v))
              if (out.planarizing.count(w)) touched = true;
          }
        if (touched || !is_flat(g, tile)) continue;
        out.kind = FlatGridResult::Kind::Flat;
        out.flat = tile;
        out.grid_minor.minor = grid_graph(out.tile_size, out.tile_size);
        for (int i = 0; i < out.tile_size; ++i)
          for (int j = 0; j < out.tile_size; ++j)
            out.grid_minor.branch_sets[static_cast<VertexId>(i) * out.tile_size + j] = {
                at(1 + a * out.tile_size + i, 1 + b * out.tile_size + j)};
        must_verify(g, out.grid_minor, "flat_grid_minor");
        return out;
      }
  }

  // no usable tile: look for a K_{3,l} through the grid and one vertex of X
  GridSpec spec{k, k};
  for (VertexId x : out.planarizing) {
    VertexSet a;
    for (int i = 1; i + 1 < k; ++i)
      for (int j = 1; j + 1 < k; ++j)
        if (g.adjacent(x, at(i, j))) a.insert(spec.vertex(i, j));
    if (a.empty()) continue;
    CombWitness w = k2r_in_grid(spec, a);
    int l = w.l();
    MinorMapping m;
    m.minor = complete_bipartite(3, l);
    auto lift = [&](const VertexSet& s) {
      VertexSet r;
      for (VertexId v : s) r.insert(phi[v]);
      return r;
    };
    m.branch_sets[0] = lift(w.comb);
    m.branch_sets[1] = lift(w.comb_prime);
    m.branch_sets[2] = {x};
    for (int i = 0; i < l; ++i) m.branch_sets[3 + i] = lift(w.mapping.branch_sets.at(2 + i));
    LowerBoundCertificate cert = certify_lower_bound(g, m, budget);
    if (!out.certificate || cert.r > out.certificate->r) out.certificate = std::move(cert);
  }
  if (out.certificate && out.certificate->exceeds) {
    out.kind = FlatGridResult::Kind::Certificate;
    return out;
  }
  out.note += "; scale insufficient: no untouched flat tile";
  if (out.certificate) out.note += " and the K_{3,r} bound does not exceed the budget";
  return out;
}

std::string to_json(const MinorMapping& m) {
  using nlohmann::json;
  json j;
  j["minor"]["vertices"] = m.minor.vertices();
  j["minor"]["edges"] = json::array();
  for (auto& [id, e] : m.minor.edge_map()) j["minor"]["edges"].push_back({e.u, e.v});
  j["branch_sets"] = json::object();
  for (auto& [v, s] : m.branch_sets) j["branch_sets"][std::to_string(v)] = std::vector<VertexId>(s.begin(), s.end());
  return j.dump();
}

MinorMapping minor_mapping_from_json(const std::string& text) {
  using nlohmann::json;
  MinorMapping m;
  try {
    json j = json::parse(text);
    const json& mn = j.at("minor");
    if (mn.contains("complete_bipartite")) {
      m.minor = complete_bipartite(mn["complete_bipartite"].at(0).get<int>(), mn["complete_bipartite"].at(1).get<int>());
    } else {
      for (VertexId v : mn.at("vertices")) m.minor.add_vertex(v);
      for (const json& e : mn.at("edges")) m.minor.add_edge(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
    }
    for (auto& [k, s] : j.at("branch_sets").items()) {
      VertexSet bs;
      for (VertexId v : s) bs.insert(v);
      m.branch_sets[std::stoll(k)] = bs;
    }
  } catch (const json::exception& e) {
    throw GraphError(std::string("minor mapping json: ") + e.what());
  }
  return m;
}

std::string to_json(const LowerBoundCertificate& c) {
  using nlohmann::json;
  json j;
  j["r"] = c.r;
  j["implied_bound"] = c.implied_bound;
  j["budget"] = c.budget;
  j["exceeds"] = c.exceeds;
  j["verdict"] = c.verdict;
  j["witness"] = json::parse(to_json(c.witness));
  return j.dump();
}

}  // namespace genuskit
