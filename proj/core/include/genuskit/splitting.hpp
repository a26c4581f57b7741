#pragma once

#include <string>
#include <vector>

#include "genuskit/instance.hpp"

namespace genuskit {

// Split `vertex` of H into two copies: side1 goes to one, the rest of its
// H-edges to the other. Both sides must be contiguous in the stored drawing.
struct Splitting {
  VertexId vertex = -1;
  std::vector<EdgeId> side1;
};

// Always read against the instance's stored drawing of H.
struct SplittingSequence {
  std::vector<Splitting> steps;
};

struct SplitResult {
  ApexInstance instance;                 // G', X, H' and the induced drawing of H'
  std::vector<VertexSet> fragments;      // components of H', by smallest vertex
  std::map<VertexId, VertexId> provenance;             // vertex of G' -> vertex of G
  std::map<VertexId, std::vector<VertexId>> copies;    // split vertex -> its copies, itself first
  std::vector<EdgeId> removed_apex_edges;              // v-X edges dropped at split vertices
};

// Copies of v are the classes of the common refinement of all partitions at
// v. The class holding v's smallest edge keeps the id v.
SplitResult apply_sequence(const ApexInstance& inst, const SplittingSequence& seq);

// G'[V(C) + X] for fragment i
Graph fragment_graph(const SplitResult& r, std::size_t i);

// Four nonempty parts when intersected, as sets of v's incident edges.
bool partitions_cross(const std::vector<EdgeId>& incident, const std::vector<EdgeId>& a,
                      const std::vector<EdgeId>& b);
bool is_monotone(const ApexInstance& inst, const SplittingSequence& seq);

// Pairwise non-crossing sequence with the same H'. Per vertex it uses
// r_v - 1 splittings (one if r_v = 1), which can be more than the input
// length when the input partitions cross.
SplittingSequence make_monotone(const ApexInstance& inst, const SplittingSequence& seq);

// Pairwise non-crossing splittings at v whose refinement is exactly
// `classes` (which must cover v's H-edges). Throws GraphError if the
// classes cross in the stored drawing.
std::vector<Splitting> realize_partition(const ApexInstance& inst, VertexId v,
                                         std::vector<std::vector<EdgeId>> classes);

struct GlueResult {
  SurfaceEmbedding embedding;  // of the original G
  int genus = 0;
  int fragment_genus_sum = 0;
  int join_cost = 0;     // reconnecting the copies of X
  int undo_cost = 0;     // merging copies of split vertices
  int restore_cost = 0;  // putting back removed v-X edges
  int k = 0;
  int x_count = 0;
  double c1 = 0;         // (genus - fragment_genus_sum) / (k |X|), 0 if k|X| = 0
};

// psi[i] embeds fragment_graph(apply_sequence(inst, seq), i).
GlueResult glue_fragmented(const ApexInstance& inst, const SplittingSequence& seq,
                           const std::vector<SurfaceEmbedding>& psi);

std::string to_json(const SplittingSequence& s);
SplittingSequence splitting_sequence_from_json(const std::string& text);

}  // namespace genuskit
