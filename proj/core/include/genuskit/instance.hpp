#pragma once

#include <optional>

#include "genuskit/embedding.hpp"

namespace genuskit {

// G with apex set X such that H = G - X is planar.
struct ApexInstance {
  Graph graph;
  VertexSet apices;
  Graph planar_piece;
  std::optional<SurfaceEmbedding> drawing;

  // Throws GraphError if X is not inside V(G) or G - X is not planar.
  // A drawing is computed unless one is supplied.
  static ApexInstance make(const Graph& g, const VertexSet& x);
  static ApexInstance make(const Graph& g, const VertexSet& x, SurfaceEmbedding drawing);

  const SurfaceEmbedding& stored_drawing() const;
};

}  // namespace genuskit
