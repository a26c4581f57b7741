#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genuskit/instance.hpp"

namespace genuskit {

// A union of blocks of H hanging off the rest of H at one cut vertex (the
// portal), seeing at most one apex outside the portal.
struct Extremity {
  VertexSet vertices;
  EdgeSet edges;  // H-edges of the component
  VertexId portal = -1;
  std::optional<VertexId> apex;
};

struct ExtremityCheck {
  bool ok = false;
  std::string reason;  // blocks|portal|boundary|apex|planarity
};

ExtremityCheck check_extremity(const ApexInstance& inst, const Extremity& c);

// Maximal extremities, kept greedily by ascending portal id when they are
// edge-disjoint and no non-portal vertex is shared.
std::vector<Extremity> find_extremities(const ApexInstance& inst);

using EmbedFn = std::function<SurfaceEmbedding(const Graph&)>;

struct ExpandResult {
  SurfaceEmbedding embedding;  // of G
  Graph contracted;            // G' handed to the embedder
  int contracted_genus = 0;
  int genus = 0;
};

// Contract each extremity into its portal (adding a portal-apex edge when
// the apex lost its neighbours), embed, and draw each extremity back in a
// disk next to that edge.
ExpandResult contract_then_expand(const ApexInstance& inst, const std::vector<Extremity>& ext,
                                  const EmbedFn& embed);

// M + 2 * seq_len * x_count
long extremity_number_bound(long m, long seq_len, long x_count);

}  // namespace genuskit
