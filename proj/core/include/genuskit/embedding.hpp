#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genuskit/graph.hpp"

namespace genuskit {

// A dart is one end of an edge: 2*e + end. End 0 sits at edge.u, end 1 at
// edge.v. For a loop both ends sit at the same vertex.
using Dart = std::int64_t;
inline Dart make_dart(EdgeId e, int end) { return 2 * e + end; }
inline EdgeId dart_edge(Dart d) { return d >> 1; }
inline int dart_end(Dart d) { return static_cast<int>(d & 1); }
inline Dart twin(Dart d) { return d ^ 1; }

VertexId dart_vertex(const Graph& g, Dart d);

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RotationSystem {
  std::map<VertexId, std::vector<Dart>> rotation;
  std::map<EdgeId, int> signature;  // missing entry means +1
  int sign(EdgeId e) const {
    auto it = signature.find(e);
    return it == signature.end() ? 1 : it->second;
  }
  bool operator==(const RotationSystem& o) const;
};

struct FaceWalk {
  std::vector<Dart> darts;         // dart traversed at each step
  std::vector<VertexId> vertices;  // vertex at the start of each step
  std::vector<std::int64_t> flags; // flag (2*dart+side) at each step
  VertexId isolated = -1;          // set for the empty face of an isolated vertex
  std::size_t length() const { return darts.size(); }
};

struct FaceData {
  std::vector<FaceWalk> faces;
  // flag 2*dart + side -> face index
  std::map<std::int64_t, int> flag_face;
  std::map<VertexId, int> isolated_face;
};

FaceData trace_faces(const Graph& g, const RotationSystem& r);

struct GenusReport {
  int euler_genus = 0;               // sum over components
  std::vector<int> component_genus;  // ascending by min vertex id
  int components = 0;
  bool orientable = true;
};

struct SurfaceEmbedding {
  Graph graph;
  RotationSystem rot;

  FaceData faces() const { return trace_faces(graph, rot); }
  GenusReport genus_report() const;
  int euler_genus() const { return genus_report().euler_genus; }
  bool orientable() const;
};

// Throws on disconnected input only if strict is set.
int euler_genus_of(const SurfaceEmbedding& e, bool strict = false);

struct VerifyResult {
  bool ok = false;
  std::string diagnostic;  // empty when ok
  int euler_genus = -1;
};

VerifyResult verify_embedding(const Graph& g, const RotationSystem& r);

// utility
bool is_orientable(const Graph& g, const RotationSystem& r);
void flip_vertex(SurfaceEmbedding& e, VertexId v);
// Vertex flips so that a spanning forest is all +; same surface, same faces.
void normalize_signatures(SurfaceEmbedding& e);
// Trivial rotation: incident darts in ascending dart order, all +.
RotationSystem default_rotation(const Graph& g);
std::vector<Dart> darts_at(const Graph& g, VertexId v);

std::string to_json(const SurfaceEmbedding& e, bool include_edges = false);
SurfaceEmbedding embedding_from_json(const std::string& text);
// If g is supplied the JSON need not carry an "edges" array.
SurfaceEmbedding embedding_from_json(const std::string& text, const Graph& g);
std::string to_dot(const SurfaceEmbedding& e);

}  // namespace genuskit
