#pragma once

#include <vector>

#include "genuskit/embedding.hpp"

namespace genuskit {

// A corner at v: new darts go immediately after `after` in v's rotation.
// after == -1 only for a vertex with empty rotation.
struct Corner {
  VertexId v = -1;
  Dart after = -1;
};

std::vector<Corner> corners_at(const SurfaceEmbedding& e, VertexId v);
int face_of_corner(const FaceData& fd, const Corner& c);

EdgeId insert_edge_at(SurfaceEmbedding& e, Corner cu, Corner cv, int sign, EdgeId id = -1);

struct Insertion {
  EdgeId edge = -1;
  int delta = 0;  // change in Euler genus
};

// Minimum-genus insertion of a new u-v edge over all corner pairs and signs.
Insertion insert_edge_best(SurfaceEmbedding& e, VertexId u, VertexId v, EdgeId id = -1);

void delete_edge(SurfaceEmbedding& e, EdgeId id);
void delete_vertex(SurfaceEmbedding& e, VertexId v);

// Contract non-loop edge; the surviving vertex is `keep`. Genus unchanged.
void contract_edge(SurfaceEmbedding& e, EdgeId id, VertexId keep);

// Identify b into a (a survives). Returns the genus change (0, 1 or 2).
int identify_vertices(SurfaceEmbedding& e, VertexId a, VertexId b);

// Vertex and edge ids must be disjoint.
SurfaceEmbedding disjoint_union(const SurfaceEmbedding& a, const SurfaceEmbedding& b);

// 2-sum along a virtual edge. piece shares exactly the endpoint ids of
// e_piece with host's e_host endpoints (same ids); everything else disjoint.
// Both virtual edges are deleted. Euler genus is additive.
SurfaceEmbedding two_sum(const SurfaceEmbedding& host, EdgeId e_host, const SurfaceEmbedding& piece,
                         EdgeId e_piece);

struct RoutedEdge {
  VertexId u = -1;  // on face f1
  VertexId v = -1;  // on face f2
  EdgeId id = -1;   // -1: fresh id
};

struct SurgeryResult {
  SurfaceEmbedding emb;
  int delta = 0;
  std::vector<EdgeId> edges;
};

// Route edges through one new handle between faces f1 != f2.
SurgeryResult add_handle_for_edges(const SurfaceEmbedding& e, const std::vector<RoutedEdge>& edges,
                                   int f1, int f2);

// Join two embeddings by a cylinder from face f1 of a to face f2 of b.
SurgeryResult add_cylinder(const SurfaceEmbedding& a, const SurfaceEmbedding& b, int f1, int f2,
                           const std::vector<RoutedEdge>& crossing);

}  // namespace genuskit
