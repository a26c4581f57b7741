#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include <genuskit/graph.hpp>

namespace cli {

using nlohmann::json;
using namespace genuskit;

constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kInvalid = 2, kInterval = 3, kVerdict = 4 };

struct Invalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Invalid("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Graph load_graph(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw Invalid("cannot open " + path);
  return read_graph_file(path);
}

template <class V>
VertexSet as_set(const V& v) {
  return VertexSet(v.begin(), v.end());
}

// Every JSON document the tool prints goes through here.
inline void emit(json j, const std::string& kind) {
  json out{{"schema_version", kSchemaVersion}, {"kind", kind}};
  for (auto& [k, v] : j.items()) out[k] = v;
  std::cout << out.dump() << "\n";
}

// --threads beats GENUSKIT_THREADS beats 1
inline int thread_count(int flag) {
  if (flag > 0) return flag;
  if (const char* e = std::getenv("GENUSKIT_THREADS")) {
    int n = std::atoi(e);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace cli
