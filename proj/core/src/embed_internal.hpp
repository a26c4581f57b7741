#pragma once

#include <functional>

#include "genuskit/apex_embed.hpp"

namespace genuskit::detail {

using InstanceEmbedder = std::function<EmbedResult(const ApexInstance&)>;

void push(EmbedResult& r, std::string step, int delta, std::string source);
// Appends child entries under a prefix and merges stats by summing.
void absorb(EmbedResult& r, const EmbedResult& child, const std::string& prefix);

// Inserts every edge of g missing from emb (adding missing vertices as
// isolated), in ascending edge id order.
int add_missing(SurfaceEmbedding& emb, const Graph& g);

// Verifies against g, sets genus, checks the ledger adds up.
EmbedResult finish(EmbedResult r, const Graph& g, const std::string& who);

// apply_sequence, embed every fragment with `fn`, glue_fragmented.
EmbedResult embed_split(const ApexInstance& inst, const SplittingSequence& seq, const InstanceEmbedder& fn,
                        const std::string& label);

// Splits every vertex in `at` into the classes given, falling back to the
// finest block classes where the requested classes cross.
SplittingSequence split_into_classes(const ApexInstance& inst,
                                     const std::map<VertexId, std::vector<std::vector<EdgeId>>>& at,
                                     std::size_t& fallbacks);

// Blocks of H at v, as edge classes.
std::vector<std::vector<EdgeId>> block_classes(const Graph& h, VertexId v);

// Runs fn; on GraphError runs embed_by_insertion and counts it.
EmbedResult or_fallback(const ApexInstance& inst, const InstanceEmbedder& fn, const std::string& what);

// Apices with at least one neighbour in H.
VertexSet active_apices(const ApexInstance& inst);

}  // namespace genuskit::detail
