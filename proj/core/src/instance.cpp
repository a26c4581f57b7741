#include "genuskit/instance.hpp"

#include "genuskit/planar.hpp"

namespace genuskit {

namespace {

ApexInstance base(const Graph& g, const VertexSet& x) {
  for (VertexId v : x)
    if (!g.has_vertex(v)) throw GraphError("apex " + std::to_string(v) + " not in graph");
  ApexInstance inst;
  inst.graph = g;
  inst.apices = x;
  inst.planar_piece = remove_vertices(g, x);
  return inst;
}

}  // namespace

ApexInstance ApexInstance::make(const Graph& g, const VertexSet& x) {
  ApexInstance inst = base(g, x);
  auto r = planar_embed(inst.planar_piece);
  if (!r.planar) throw GraphError("G - X is not planar");
  inst.drawing = std::move(*r.embedding);
  return inst;
}

ApexInstance ApexInstance::make(const Graph& g, const VertexSet& x, SurfaceEmbedding drawing) {
  ApexInstance inst = base(g, x);
  if (!(drawing.graph == inst.planar_piece)) {
    // labels may differ; compare structure only
    bool same = drawing.graph.num_vertices() == inst.planar_piece.num_vertices() &&
                drawing.graph.edge_map().size() == inst.planar_piece.edge_map().size();
    if (same)
      for (auto& [id, e] : inst.planar_piece.edge_map()) {
        if (!drawing.graph.has_edge(id) || drawing.graph.edge(id).u != e.u || drawing.graph.edge(id).v != e.v) {
          same = false;
          break;
        }
      }
    if (!same) throw GraphError("drawing is not of G - X");
  }
  auto v = verify_embedding(inst.planar_piece, drawing.rot);
  if (!v.ok) throw GraphError("drawing invalid: " + v.diagnostic);
  if (v.euler_genus != 0) throw GraphError("drawing is not planar");
  drawing.graph = inst.planar_piece;
  inst.drawing = std::move(drawing);
  return inst;
}

const SurfaceEmbedding& ApexInstance::stored_drawing() const {
  if (!drawing) throw GraphError("instance has no drawing");
  return *drawing;
}

}  // namespace genuskit
