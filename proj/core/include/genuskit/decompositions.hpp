#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "genuskit/extremities.hpp"
#include "genuskit/splitting.hpp"

namespace genuskit {

// A path of H: vertices v0..vk and the edges joining consecutive ones.
// A single vertex with no edges is a path too.
struct PathRef {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  VertexId front() const { return vertices.front(); }
  VertexId back() const { return vertices.back(); }
  bool operator==(const PathRef&) const = default;
};

// Picks the smallest-id edge between consecutive vertices.
PathRef path_from_vertices(const Graph& h, const std::vector<VertexId>& vs);
bool is_path_in(const Graph& h, const PathRef& p);

// x2 == -1 stands for the dummy partner of a lone apex.
struct CoupledSet {
  PathRef path;
  VertexId x1 = -1, x2 = -1;
  EdgeSet edges;  // G-edges between V(path) and {x1, x2}
};

struct Verdict {
  bool ok = true;
  std::string why;
  explicit operator bool() const { return ok; }
};

Verdict is_coupled(const ApexInstance& inst, const CoupledSet& c);

struct CoupledPartition {
  std::vector<CoupledSet> parts;
  int k = 0;
};

// Minimum number of coupled parts covering E(V(p), triple).
CoupledPartition interleaving_decompose(const ApexInstance& inst, const PathRef& p,
                                        const std::array<VertexId, 3>& triple);
// Same, over all pairs of X at once.
CoupledPartition coupled_decompose_full(const ApexInstance& inst, const PathRef& p);
// Minimum coupled cover of exactly `target` (apex edges at V(p)); an apex
// edge at V(p) outside target may not be swallowed by an internal vertex.
CoupledPartition coupled_decompose_edges(const ApexInstance& inst, const PathRef& p, const EdgeSet& target);

// --- kissing decomposition --------------------------------------------

bool is_face_subpath(const SurfaceEmbedding& d, int face, const PathRef& p);

struct KissingPiece {
  int rank = 0;  // position of its face in `faces`
  CoupledSet set;
};

struct KissingDecomposition {
  SurfaceEmbedding drawing;  // of H; face 0 plays the outer face
  std::vector<int> faces;    // cover faces, priority order
  std::vector<KissingPiece> pieces;
  std::size_t cover_size = 0;
  std::size_t merge_slack = 0;  // |X| - 1: Euler genus merging X may add
  std::size_t cut_rounds = 0;
};

// 0 when no case applies, else the first case (1, 2, 3) that holds.
int kissing_case(const ApexInstance& inst, const SurfaceEmbedding& d, const CoupledSet& a, const CoupledSet& b);

// Throws GraphError unless H is 2-connected.
KissingDecomposition kissing_decomposition(const ApexInstance& inst);
Verdict validate_kissing(const ApexInstance& inst, const KissingDecomposition& k);

// --- centipedes and butterflies ----------------------------------------

struct Butterfly {
  VertexSet vertices;  // V(C), s and t included
  EdgeSet edges;       // E(C)
  VertexId s = -1, t = -1;
  VertexId x1 = -1, x2 = -1;
  EdgeSet r;
};

Verdict is_centipede(const ApexInstance& inst, const SurfaceEmbedding& d, int face, const CoupledSet& c);
Verdict is_butterfly(const ApexInstance& inst, const Butterfly& b);

struct Piece {
  enum class Kind { Centipede, Butterfly } kind = Kind::Centipede;
  int face = -1;  // centipedes only
  CoupledSet centipede;
  Butterfly butterfly;
  const EdgeSet& apex_edges() const { return kind == Kind::Centipede ? centipede.edges : butterfly.r; }
};

struct MeasuredBound {
  double measured = 0;
  std::string expression;  // the asymptotic claim it is logged against
};

struct DecompositionReport {
  SurfaceEmbedding drawing;
  std::vector<Piece> pieces;
  std::map<std::string, long> counts;
  std::map<std::string, MeasuredBound> bounds;
};

DecompositionReport centipede_butterfly(const ApexInstance& inst);
// Every piece passes its predicate, pieces meet only at endpoints and the
// apex edges partition E(X, V(H)).
Verdict validate_pieces(const ApexInstance& inst, const DecompositionReport& r);
std::string to_json(const DecompositionReport& r);

// --- separators -----------------------------------------------------------

struct PropellerSeparation {
  VertexSet w_prime;               // cut vertices seeing x1 and x2
  std::vector<VertexSet> classes;  // components after cutting H along w_prime
  std::vector<VertexSet> l_prime;  // inner classes touching x3
  std::vector<std::pair<VertexId, VertexSet>> propellers;  // centre, vertices
  SplittingSequence seq;
  std::size_t fallbacks = 0;  // vertices where cluster classes crossed and were refined
};

PropellerSeparation propeller_separation(const ApexInstance& inst, const std::array<VertexId, 3>& triple);

struct SeparatorSplit {
  SplittingSequence seq;
  std::size_t fixups = 0;  // splits added after the per-triple pass
};

// Throws GraphError naming a vertex with three apex neighbours.
SeparatorSplit split_for_2apex_or_simple_separators(const ApexInstance& inst);
// Condition (1) or (2) per component of the split instance; empty when all hold.
std::vector<VertexSet> separator_condition_failures(const SplitResult& r);

// --- isolation and trees ------------------------------------------------

struct Isolation {
  std::vector<EdgeSet> c1, c2, c3;
  std::vector<Extremity> c4;
};

// c_edges: the H-edges of a connected union of blocks.
Isolation isolate_2connected(const ApexInstance& inst, const EdgeSet& c_edges);

struct Cluster {
  VertexSet vertices;
  EdgeSet edges;
  int parent = -1;
  VertexId attach = -1;  // shared vertex with the parent
  bool in_p = false;     // an extremity leaf
};

struct ClusterTree {
  std::vector<Cluster> clusters;
  long m = 0;  // extremity number it was built with
  std::string bound_expression = "O(g^4 |X|^8 + g^3 |X|^6 M + g^2 |X|^4 M^2)";
};

// Throws GraphError with the offending block or separator on a
// precondition violation.
ClusterTree locally_2apex_tree(const ApexInstance& inst, long m);
Verdict validate_cluster_tree(const ApexInstance& inst, const ClusterTree& t);

// Vertex sets of the blocks of H (isolated vertices count as blocks)
// seeing at least three apices.
std::vector<VertexSet> count_heavy_blocks(const ApexInstance& inst);

// N(S) ∩ X for a vertex set of H
VertexSet apex_neighbours(const ApexInstance& inst, const VertexSet& s);

}  // namespace genuskit
