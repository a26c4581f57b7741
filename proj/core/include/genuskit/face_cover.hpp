#pragma once

#include <string>
#include <vector>

#include "genuskit/embedding.hpp"

namespace genuskit {

struct FaceCover {
  std::vector<int> faces;  // indices into e.faces(), ascending
  VertexSet covered;
};

bool is_face_cover(const SurfaceEmbedding& e, const FaceCover& c);

// Exact minimum cover of u by faces of e. Among minimum covers the
// lexicographically smallest face-index set wins.
FaceCover min_face_cover(const SurfaceEmbedding& e, const VertexSet& u);

struct CoverOverEmbeddings {
  SurfaceEmbedding embedding;
  FaceCover cover;
  bool exact = false;  // every embedding was tried
  std::size_t tried = 0;
};

CoverOverEmbeddings min_face_cover_over_embeddings(const Graph& h, const VertexSet& u,
                                                   std::size_t scale_limit = 100000);

struct RefineResult {
  std::vector<int> faces;       // surviving face indices
  bool minimized = false;       // input was not minimal and was shrunk first
  std::size_t input_size = 0;   // after minimization
  std::size_t edge_disjoint = 0;
  std::size_t charged_away = 0; // deleted by the SPQR charging pass
  std::size_t filtered = 0;     // deleted by the final pairwise check
  std::map<int, std::vector<int>> charges;  // survivor -> faces charged to it
  double constant = 0;          // |F| / (|F'| * max(g,1))
};

// Faces of e pairwise sharing at most one vertex, chosen from cover.
RefineResult refine_cover_spqr(const Graph& h, const SurfaceEmbedding& e, const FaceCover& cover, int g);

bool pairwise_one_shared(const SurfaceEmbedding& e, const std::vector<int>& faces);

}  // namespace genuskit
