#include <chrono>
#include <random>

#include <CLI11.hpp>

#include <genuskit/apex_embed.hpp>
#include <genuskit/decompositions.hpp>
#include <genuskit/face_cover.hpp>
#include <genuskit/minors.hpp>
#include <genuskit/oracle.hpp>
#include <genuskit/planar.hpp>
#include <genuskit/splitting.hpp>

#include "cli_util.hpp"

using namespace cli;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int threads = 0;
  double time_limit = 60;
  long max_states = 200'000'000;
};

OracleBudget budget_of(const Common& c, bool orientable = false) {
  OracleBudget b;
  b.time_limit = c.time_limit;
  b.max_states = c.max_states;
  b.threads = thread_count(c.threads);
  b.orientable_only = orientable;
  return b;
}

// The first object (depth first) holding every key in `want`; lets a verb
// read its input straight out of another verb's output.
const json* find_object(const json& j, std::initializer_list<const char*> want) {
  if (j.is_object()) {
    bool all = true;
    for (const char* k : want) all = all && j.contains(k);
    if (all) return &j;
  }
  if (j.is_structured())
    for (auto& [k, v] : j.items())
      if (const json* hit = find_object(v, want)) return hit;
  return nullptr;
}

std::string witness_document(const std::string& text) {
  json j = json::parse(text);
  const json* w = find_object(j, {"minor", "branch_sets"});
  return w ? w->dump() : text;
}

std::string embedding_document(const std::string& text) {
  json j = json::parse(text);
  if (j.is_object() && j.contains("embedding")) return j["embedding"].dump();
  return text;
}

json path_json(const PathRef& p) { return {{"vertices", p.vertices}, {"edges", p.edges}}; }

json coupled_json(const CoupledSet& c) {
  return {{"path", path_json(c.path)}, {"apices", {c.x1, c.x2}}, {"edges", c.edges}};
}

int cmd_genus_exact(const std::string& file, bool orientable, bool as_json, const Common& c) {
  Graph g = load_graph(file);
  OracleResult r = exact_euler_genus(g, budget_of(c, orientable));
  int value = orientable ? r.orientable_genus : r.euler_genus;
  if (as_json) {
    json j{{"exact", r.exact}, {"euler_genus", r.euler_genus}, {"lower", r.lower}, {"upper", r.upper},
           {"states", r.states}};
    if (orientable) j["orientable_genus"] = r.orientable_genus;
    emit(j, "genus");
  } else if (r.exact) {
    std::cout << value << "\n";
  } else {
    std::cout << r.lower << ".." << r.upper << "\n";
  }
  return r.exact ? kOk : kInterval;
}

int cmd_genus_lower(const std::string& file, const std::string& witness, int budget) {
  Graph g = load_graph(file);
  int euler = euler_lower_bound(g);
  std::optional<LowerBoundCertificate> cert;
  if (!witness.empty()) {
    cert = certify_lower_bound(g, minor_mapping_from_json(witness_document(slurp(witness))),
                               std::max(budget, 0));
  } else if (auto m = find_k3r_minor(g)) {
    cert = certify_lower_bound(g, *m, std::max(budget, 0));
  }
  int lb = std::max(euler, cert ? cert->implied_bound : 0);
  json j{{"lower_bound", lb}, {"euler_bound", euler}};
  j["ledger"] = json::array({{{"step", "euler formula"}, {"bound", euler}}});
  if (cert) {
    j["certificate"] = json::parse(to_json(*cert));
    j["ledger"].push_back({{"step", "K_{3,r} minor"}, {"bound", cert->implied_bound}, {"r", cert->r}});
  }
  if (budget >= 0) j["budget"] = budget;
  emit(j, "lower_bound");
  return budget >= 0 && lb > budget ? kVerdict : kOk;
}

int cmd_embed(const std::string& which, const std::string& file, const std::vector<VertexId>& apices, int budget,
              bool tight, const std::string& dot) {
  Graph g = load_graph(file);
  EmbedResult r;
  if (which == "1apex") {
    if (apices.size() != 1) throw Invalid("embed 1apex needs exactly one apex");
    r = embed_1apex(g, apices.front(), tight);
  } else {
    ApexInstance inst = ApexInstance::make(g, as_set(apices));
    r = which == "2apex" ? embed_2apex(inst) : embed_kapex(inst, budget);
  }
  json j = json::parse(to_json(r));
  j["command"] = "embed " + which;
  if (budget >= 0) j["within_budget"] = r.genus <= budget;
  emit(j, "embed_result");
  if (!dot.empty()) {
    std::ofstream out(dot);
    out << to_dot(r.embedding);
  }
  return kOk;
}

int cmd_decompose(const std::string& which, const std::string& file, const std::vector<VertexId>& apices,
                  const std::vector<VertexId>& path, const std::vector<VertexId>& triple) {
  Graph g = load_graph(file);
  ApexInstance inst = ApexInstance::make(g, as_set(apices));
  if (which == "centipede") {
    DecompositionReport r = centipede_butterfly(inst);
    Verdict v = validate_pieces(inst, r);
    json j = json::parse(to_json(r));
    j["valid"] = v.ok;
    if (!v.ok) j["why"] = v.why;
    emit(j, "decomposition");
    return kOk;
  }
  if (which == "kissing") {
    KissingDecomposition k = kissing_decomposition(inst);
    Verdict v = validate_kissing(inst, k);
    json pieces = json::array();
    for (auto& p : k.pieces) {
      json pj = coupled_json(p.set);
      pj["rank"] = p.rank;
      pieces.push_back(pj);
    }
    emit({{"faces", k.faces},
          {"pieces", pieces},
          {"cover_size", k.cover_size},
          {"merge_slack", k.merge_slack},
          {"cut_rounds", k.cut_rounds},
          {"valid", v.ok},
          {"why", v.why}},
         "kissing");
    return kOk;
  }
  if (path.empty()) throw Invalid("decompose interleave needs --path");
  PathRef p = path_from_vertices(inst.planar_piece, path);
  CoupledPartition part;
  if (triple.empty()) {
    part = coupled_decompose_full(inst, p);
  } else {
    if (triple.size() != 3) throw Invalid("--triple takes three apices");
    part = interleaving_decompose(inst, p, {triple[0], triple[1], triple[2]});
  }
  json parts = json::array();
  for (auto& s : part.parts) parts.push_back(coupled_json(s));
  emit({{"k", part.k}, {"parts", parts}}, "interleave");
  return kOk;
}

int cmd_split(const std::string& file, const std::vector<VertexId>& apices, const std::string& seq_file, bool glue) {
  Graph g = load_graph(file);
  ApexInstance inst = ApexInstance::make(g, as_set(apices));
  SplittingSequence seq = seq_file.empty() ? split_for_2apex_or_simple_separators(inst).seq
                                           : splitting_sequence_from_json(slurp(seq_file));
  SplitResult r = apply_sequence(inst, seq);
  json frags = json::array();
  for (auto& f : r.fragments) frags.push_back(f);
  json j{{"sequence", json::parse(to_json(seq))},
         {"fragments", frags},
         {"removed_apex_edges", r.removed_apex_edges},
         {"monotone", is_monotone(inst, seq)}};
  if (glue) {
    std::vector<SurfaceEmbedding> psi;
    for (std::size_t i = 0; i < r.fragments.size(); ++i) {
      Graph fg = fragment_graph(r, i);
      VertexSet xs;
      for (VertexId x : inst.apices)
        if (fg.has_vertex(x)) xs.insert(x);
      psi.push_back(embed_by_insertion(ApexInstance::make(fg, xs)).embedding);
    }
    GlueResult gr = glue_fragmented(inst, seq, psi);
    j["glue"] = {{"genus", gr.genus},         {"fragment_genus_sum", gr.fragment_genus_sum},
                 {"join_cost", gr.join_cost}, {"undo_cost", gr.undo_cost},
                 {"restore_cost", gr.restore_cost}, {"c1", gr.c1}};
  }
  emit(j, "split");
  return kOk;
}

int cmd_verify_embedding(const std::string& gfile, const std::string& efile) {
  Graph g = load_graph(gfile);
  SurfaceEmbedding e = embedding_from_json(embedding_document(slurp(efile)), g);
  VerifyResult v = verify_embedding(g, e.rot);
  if (!v.ok) {
    std::cout << "FAIL " << v.diagnostic << "\n";
    return kInvalid;
  }
  std::cout << "OK genus=" << e.euler_genus() << (e.orientable() ? "" : " nonorientable") << "\n";
  return kOk;
}

int cmd_verify_minor(const std::string& gfile, const std::string& wfile) {
  Graph g = load_graph(gfile);
  MinorCheck c = verify_minor_mapping(g, minor_mapping_from_json(witness_document(slurp(wfile))));
  if (!c.ok) {
    std::cout << "FAIL " << c.reason << ": " << c.detail << "\n";
    return kInvalid;
  }
  std::cout << "OK\n";
  return kOk;
}

int cmd_facecover(const std::string& file, const std::vector<VertexId>& vs, const std::string& efile) {
  Graph g = load_graph(file);
  json j;
  if (!efile.empty()) {
    SurfaceEmbedding e = embedding_from_json(embedding_document(slurp(efile)), g);
    FaceCover c = min_face_cover(e, as_set(vs));
    j = {{"size", c.faces.size()}, {"faces", c.faces}, {"exact", true}, {"over_embeddings", false}};
  } else {
    CoverOverEmbeddings c = min_face_cover_over_embeddings(g, as_set(vs));
    j = {{"size", c.cover.faces.size()}, {"faces", c.cover.faces}, {"exact", c.exact},
         {"over_embeddings", true},      {"tried", c.tried},
         {"embedding", json::parse(to_json(c.embedding))}};
  }
  emit(j, "facecover");
  return kOk;
}

int cmd_flatgrid(const std::string& file, int budget, double c) {
  Graph g = load_graph(file);
  FlatGridResult r = flat_grid_minor(g, budget, c);
  const char* kind = r.kind == FlatGridResult::Kind::Flat          ? "flat"
                     : r.kind == FlatGridResult::Kind::Certificate ? "certificate"
                                                                   : "scale insufficient";
  json j{{"result", kind},        {"planarizing_set", r.planarizing}, {"grid_size", r.grid_size},
         {"tile_size", r.tile_size}, {"tiles", r.tiles},              {"c", r.c},
         {"note", r.note}};
  if (r.kind == FlatGridResult::Kind::Flat) {
    j["flat_vertices"] = r.flat;
    j["grid_minor"] = json::parse(to_json(r.grid_minor));
  }
  if (r.certificate) j["certificate"] = json::parse(to_json(*r.certificate));
  emit(j, "flatgrid");
  return r.kind == FlatGridResult::Kind::Certificate ? kVerdict : kOk;
}

int cmd_certify(const std::string& file, const std::string& wfile, int budget) {
  Graph g = load_graph(file);
  LowerBoundCertificate cert =
      certify_lower_bound(g, minor_mapping_from_json(witness_document(slurp(wfile))), budget);
  emit(json::parse(to_json(cert)), "certificate");
  return cert.exceeds ? kVerdict : kOk;
}

// Quick timings on fixed families; instances depend only on the seed.
int cmd_bench(int reps, const Common& c) {
  using clock = std::chrono::steady_clock;
  std::mt19937_64 rng(c.seed);
  json rows = json::array();
  auto time = [&](const std::string& name, auto&& fn) {
    double best = 1e300;
    json last;
    for (int i = 0; i < reps; ++i) {
      auto t0 = clock::now();
      last = fn();
      best = std::min(best, std::chrono::duration<double, std::milli>(clock::now() - t0).count());
    }
    rows.push_back({{"name", name}, {"best_ms", best}, {"result", last}});
  };
  for (auto [m, n] : {std::pair{3, 3}, {3, 4}, {2, 5}})
    time("exact K" + std::to_string(m) + "," + std::to_string(n),
         [&, m = m, n = n] { return exact_euler_genus(complete_bipartite(m, n), budget_of(c)).euler_genus; });
  time("planar_embed grid 30x30", [] { return planar_embed(grid_graph(30, 30)).planar; });
  GridSpec spec{8, 8};
  VertexSet a;
  for (VertexId v : spec.interior())
    if (rng() % 3 == 0) a.insert(v);
  Graph ag = apex_grid(spec, a, 64);
  time("embed_kapex apex grid 8x8", [&] { return embed_kapex(ApexInstance::make(ag, {64})).genus; });
  time("flat_grid_minor apex grid 8x8", [&] { return static_cast<int>(flat_grid_minor(ag, 0).kind); });
  emit({{"seed", c.seed}, {"reps", reps}, {"rows", rows}}, "bench");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genuskit: Euler genus tools for graphs with few apices"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "seed for randomized commands");
  app.add_option("--threads", common.threads, "worker cap (default GENUSKIT_THREADS or 1)");
  app.add_option("--time-limit", common.time_limit, "oracle time limit in seconds");
  app.add_option("--max-states", common.max_states, "oracle state limit");

  std::string file, file2, witness, sequence, embedding, dot;
  std::vector<VertexId> apices, path, triple, vertices;
  int budget = -1, reps = 3;
  double c = 4;
  bool as_json = false, orientable = false, tight = false, glue = false;
  std::function<int()> run;

  auto* genus = app.add_subcommand("genus", "exact Euler genus or lower bounds");
  genus->require_subcommand(1);
  auto* exact = genus->add_subcommand("exact", "exhaustive oracle");
  exact->add_option("file", file)->required();
  exact->add_flag("--json", as_json);
  exact->add_flag("--orientable", orientable, "orientable genus instead");
  exact->callback([&] { run = [&] { return cmd_genus_exact(file, orientable, as_json, common); }; });
  auto* lower = genus->add_subcommand("lower-bound", "Euler formula and K_{3,r} certificate");
  lower->add_option("file", file)->required();
  lower->add_option("--witness", witness);
  lower->add_option("--budget", budget);
  lower->callback([&] { run = [&] { return cmd_genus_lower(file, witness, budget); }; });

  auto* embed = app.add_subcommand("embed", "embed an apex graph");
  embed->require_subcommand(1);
  for (const char* which : {"1apex", "2apex", "kapex"}) {
    auto* s = embed->add_subcommand(which);
    s->add_option("file", file)->required();
    s->add_option("--apices", apices)->delimiter(',')->required();
    s->add_option("--budget", budget);
    s->add_option("--dot", dot, "also write a DOT dump");
    if (std::string(which) == "1apex") s->add_flag("--tight", tight, "allow the cheaper in-face home");
    std::string w = which;
    s->callback([&, w] { run = [&, w] { return cmd_embed(w, file, apices, budget, tight, dot); }; });
  }

  auto* dec = app.add_subcommand("decompose", "piece decompositions of E(X, V(H))");
  dec->require_subcommand(1);
  for (const char* which : {"kissing", "centipede", "interleave"}) {
    auto* s = dec->add_subcommand(which);
    s->add_option("file", file)->required();
    s->add_option("--apices", apices)->delimiter(',')->required();
    if (std::string(which) == "interleave") {
      s->add_option("--path", path)->delimiter(',');
      s->add_option("--triple", triple)->delimiter(',');
    }
    std::string w = which;
    s->callback([&, w] { run = [&, w] { return cmd_decompose(w, file, apices, path, triple); }; });
  }

  auto* split = app.add_subcommand("split", "apply a splitting sequence");
  split->add_option("file", file)->required();
  split->add_option("--apices", apices)->delimiter(',')->required();
  split->add_option("--sequence", sequence, "JSON sequence; default: the separator split");
  split->add_flag("--glue", glue, "embed fragments and glue back");
  split->callback([&] { run = [&] { return cmd_split(file, apices, sequence, glue); }; });

  auto* verify = app.add_subcommand("verify", "check artifacts");
  verify->require_subcommand(1);
  auto* ve = verify->add_subcommand("embedding");
  ve->add_option("graph", file)->required();
  ve->add_option("embedding", file2)->required();
  ve->callback([&] { run = [&] { return cmd_verify_embedding(file, file2); }; });
  auto* vm = verify->add_subcommand("minor");
  vm->add_option("graph", file)->required();
  vm->add_option("witness", file2)->required();
  vm->callback([&] { run = [&] { return cmd_verify_minor(file, file2); }; });

  auto* fc = app.add_subcommand("facecover", "minimum face cover");
  fc->add_option("file", file)->required();
  fc->add_option("--vertices", vertices)->delimiter(',')->required();
  fc->add_option("--embedding", embedding, "fixed embedding; default: all planar embeddings");
  fc->callback([&] { run = [&] { return cmd_facecover(file, vertices, embedding); }; });

  auto* fg = app.add_subcommand("flatgrid", "flat grid minor or a genus certificate");
  fg->add_option("file", file)->required();
  fg->add_option("--budget", budget)->required();
  fg->add_option("--c", c, "tile constant");
  fg->callback([&] { run = [&] { return cmd_flatgrid(file, budget, c); }; });

  auto* cert = app.add_subcommand("certify", "lower bound from a K_{3,r} witness");
  cert->add_option("file", file)->required();
  cert->add_option("--witness", witness)->required();
  cert->add_option("--budget", budget)->required();
  cert->callback([&] { run = [&] { return cmd_certify(file, witness, budget); }; });

  auto* bench = app.add_subcommand("bench", "quick timings");
  bench->add_option("--reps", reps);
  bench->callback([&] { run = [&] { return cmd_bench(reps, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }
  try {
    return run ? run() : kInvalid;
  } catch (const Invalid& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const EmbeddingError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    std::cerr << "error: bad json: " << e.what() << "\n";
  }
  return kInvalid;
}
