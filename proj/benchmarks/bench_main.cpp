#include <random>

#include <benchmark/benchmark.h>

#include <genuskit/apex_embed.hpp>
#include <genuskit/decompositions.hpp>
#include <genuskit/face_cover.hpp>
#include <genuskit/minors.hpp>
#include <genuskit/oracle.hpp>
#include <genuskit/planar.hpp>

using namespace genuskit;

namespace {

// r x r grid plus one apex on a third of the interior, fixed seed
Graph apex_grid_instance(int r, VertexId* apex) {
  GridSpec spec{r, r};
  std::mt19937_64 rng(r);
  VertexSet a;
  for (VertexId v : spec.interior())
    if (rng() % 3 == 0) a.insert(v);
  *apex = static_cast<VertexId>(r) * r;
  return apex_grid(spec, a, *apex);
}

void BM_ExactKmn(benchmark::State& st) {
  Graph g = complete_bipartite(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(exact_euler_genus(g).euler_genus);
}
BENCHMARK(BM_ExactKmn)->Args({3, 3})->Args({3, 4})->Args({2, 5})->Unit(benchmark::kMillisecond);

void BM_PlanarEmbedGrid(benchmark::State& st) {
  Graph g = grid_graph(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(planar_embed(g).planar);
  st.SetComplexityN(st.range(0) * st.range(0));
}
BENCHMARK(BM_PlanarEmbedGrid)->RangeMultiplier(2)->Range(8, 64)->Complexity()->Unit(benchmark::kMillisecond);

void BM_MinFaceCover(benchmark::State& st) {
  int r = static_cast<int>(st.range(0));
  Graph g = grid_graph(r, r);
  SurfaceEmbedding e = *planar_embed(g).embedding;
  VertexSet u;
  for (VertexId v = 0; v < r * r; v += 3) u.insert(v);
  for (auto _ : st) benchmark::DoNotOptimize(min_face_cover(e, u).faces.size());
}
BENCHMARK(BM_MinFaceCover)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Embed1Apex(benchmark::State& st) {
  VertexId x;
  Graph g = apex_grid_instance(static_cast<int>(st.range(0)), &x);
  for (auto _ : st) benchmark::DoNotOptimize(embed_1apex(g, x).genus);
}
BENCHMARK(BM_Embed1Apex)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_EmbedKApex(benchmark::State& st) {
  VertexId x;
  Graph g = apex_grid_instance(static_cast<int>(st.range(0)), &x);
  ApexInstance inst = ApexInstance::make(g, {x});
  for (auto _ : st) benchmark::DoNotOptimize(embed_kapex(inst).genus);
}
BENCHMARK(BM_EmbedKApex)->Arg(5)->Arg(8)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_CentipedeButterfly(benchmark::State& st) {
  VertexId x;
  Graph g = apex_grid_instance(static_cast<int>(st.range(0)), &x);
  ApexInstance inst = ApexInstance::make(g, {x});
  for (auto _ : st) benchmark::DoNotOptimize(centipede_butterfly(inst).pieces.size());
}
BENCHMARK(BM_CentipedeButterfly)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_K2rInGrid(benchmark::State& st) {
  GridSpec spec{static_cast<int>(st.range(0)), static_cast<int>(st.range(0))};
  VertexSet a = spec.interior();
  for (auto _ : st) benchmark::DoNotOptimize(k2r_in_grid(spec, a).l());
}
BENCHMARK(BM_K2rInGrid)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FlatGridMinor(benchmark::State& st) {
  VertexId x;
  Graph g = apex_grid_instance(static_cast<int>(st.range(0)), &x);
  for (auto _ : st) benchmark::DoNotOptimize(flat_grid_minor(g, 1).kind);
}
BENCHMARK(BM_FlatGridMinor)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
