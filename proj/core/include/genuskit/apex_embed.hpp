#pragma once

#include <map>
#include <string>
#include <vector>

#include "genuskit/decompositions.hpp"

namespace genuskit {

struct LedgerEntry {
  std::string step;
  int genus_added = 0;  // may be negative when a step undoes a temporary edge
  std::string source;   // which construction produced it
};

struct EmbedResult {
  SurfaceEmbedding embedding;  // of the whole input graph
  int genus = 0;
  std::vector<LedgerEntry> ledger;  // sums to genus
  std::map<std::string, long> stats;
};

int ledger_sum(const EmbedResult& r);

// Adds x and the edges of g between x and vertices already in emb. N(x) is
// covered by faces of emb; each cover face gets one handle carrying its
// edges. With home_outside, x first sits in a face outside the cover
// (joined there to one neighbour) so every cover face costs a handle;
// otherwise x starts in the first cover face.
struct ApexInsertion {
  int delta = 0;
  std::size_t cover = 0;
  bool home_outside = false;
};
ApexInsertion insert_apex_by_cover(SurfaceEmbedding& emb, const Graph& g, VertexId x, bool home_outside);

// Orientable; genus 2|cover| unless tight (or no face outside the cover
// can host the apex), then 2(|cover| - 1). stats["cover"], stats["home_outside"].
EmbedResult embed_1apex(const Graph& g, VertexId a, bool tight = false);

// Planar drawing of H, then the apices one at a time by insert_apex_by_cover.
// The fallback of every pipeline below.
EmbedResult embed_by_insertion(const ApexInstance& inst);

// pieces: centipedes on faces of `drawing` (a planar drawing of H).
EmbedResult embed_centipedes(const ApexInstance& inst, const SurfaceEmbedding& drawing,
                             const std::vector<Piece>& pieces);
EmbedResult embed_2connected_kapex(const ApexInstance& inst);
EmbedResult embed_2apex(const ApexInstance& inst);
EmbedResult embed_locally_2apex(const ApexInstance& inst, long m);
EmbedResult embed_nearly_locally_2apex(const ApexInstance& inst, long m);
EmbedResult embed_simple_separators(const ApexInstance& inst, long m);
// g_budget is advisory and only echoed in stats.
EmbedResult embed_kapex(const ApexInstance& inst, int g_budget = -1);

std::string to_json(const EmbedResult& r);

}  // namespace genuskit
