#pragma once

#include <optional>
#include <string>
#include <vector>

#include "genuskit/embedding.hpp"

namespace genuskit {

struct PlanarResult {
  bool planar = false;
  std::optional<SurfaceEmbedding> embedding;  // genus 0, all signatures +
  // subdivision of K5 or K3,3 when not planar
  std::optional<Graph> kuratowski;
  std::string kuratowski_kind;  // "K5" or "K33"
};

PlanarResult planar_embed(const Graph& g);
bool is_planar(const Graph& g);

// Branch vertices of a subdivision; "K5", "K33" or "" if g is neither.
std::string classify_kuratowski(const Graph& sub);

// Canonical identity of a face: lexicographically least rotation of its flags.
std::vector<std::int64_t> face_key(const FaceWalk& w);

VertexSet face_vertices(const FaceWalk& w);
EdgeSet face_edges(const FaceWalk& w);

// Mirror image: every rotation reversed.
void reflect(SurfaceEmbedding& e);

}  // namespace genuskit
