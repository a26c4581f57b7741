#pragma once

#include <optional>

#include "genuskit/embedding.hpp"

namespace genuskit {

struct OracleBudget {
  long max_states = 200'000'000;
  double time_limit = 60.0;  // seconds
  bool orientable_only = false;
  int threads = 1;
};

struct OracleResult {
  bool exact = false;
  int euler_genus = 0;       // exact value, or the upper end when !exact
  int lower = 0;             // proven lower bound
  int upper = 0;             // witnessed upper bound
  int orientable_genus = -1; // gamma = eg/2, only with orientable_only
  std::optional<SurfaceEmbedding> witness;
  long states = 0;
};

// Minimum Euler genus over all rotation systems and co-tree signatures.
// Disconnected graphs: sum over components.
OracleResult exact_euler_genus(const Graph& g, const OracleBudget& b = {});

// ceil((m-2)(n-2)/4). This is Ringel's orientable genus of K_{m,n}; the
// Euler genus is kmn_euler_genus below. They agree for m or n <= 4 with
// (m-2)(n-2) <= 2.
int kmn_genus(int m, int n);

// min(2*gamma, nonorientable genus) = ceil((m-2)(n-2)/2)
int kmn_euler_genus(int m, int n);

// max(0, ceil((E-3V+6)/3)), bipartite: max(0, ceil((E-2V+4)/2)); computed on
// the simple underlying graph, summed over components.
int euler_lower_bound(const Graph& g);

}  // namespace genuskit
