#pragma once

#include <functional>
#include <vector>

#include "genuskit/embedding.hpp"

namespace genuskit {

// Q only appears for a single-edge input; otherwise real edges live directly
// in the S/P/R skeletons.
enum class SpqrKind { S, P, Q, R };

struct SpqrNode {
  SpqrKind kind = SpqrKind::R;
  Graph skeleton;            // real edges keep their ids; virtual ids >= first_virtual
  std::vector<EdgeId> virtuals;
};

struct SpqrTree {
  std::vector<SpqrNode> nodes;
  EdgeId first_virtual = 0;
  // virtual edge id -> the two nodes holding it
  std::map<EdgeId, std::pair<int, int>> pairing;
  std::vector<std::vector<int>> adj;

  bool is_virtual(EdgeId e) const { return e >= first_virtual; }
  std::size_t count(SpqrKind k) const;
};

// Throws GraphError unless h is 2-connected and loopless.
SpqrTree spqr_decompose(const Graph& h);

// Real edges in the subtree of `v` when the tree is rooted at `root`.
EdgeSet subtree_real_edges(const SpqrTree& t, int root, int v);

struct EnumerationStats {
  std::size_t visited = 0;
  double total = 0;       // number of distinct choices (may exceed visited)
  bool complete = false;  // every planar embedding of h, up to mirror images, was visited
};

// Visits planar embeddings of h. 2-connected pieces vary P-node orders and
// R-node reflections; blocks are glued at cut vertices in one fixed nesting.
// visit returns false to stop.
EnumerationStats enumerate_planar_embeddings(const Graph& h, std::size_t limit,
                                             const std::function<bool(const SurfaceEmbedding&)>& visit);

}  // namespace genuskit
