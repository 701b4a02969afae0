#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "geoctx/dsl.hpp"

using namespace geoctx;

namespace {

std::string fixture(const char* name) {
  std::ifstream in(std::string(GEOCTX_FIXTURE_DIR) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const dsl::Model& int_model() {
  static const dsl::Model m = dsl::load_text(fixture("int.geo"));
  return m;
}

const dsl::Model& pc_model() {
  static const dsl::Model m = dsl::load_text(fixture("pc.geo"));
  return m;
}

void BM_ParseAndLoad(benchmark::State& state) {
  std::string text = fixture("pc.geo");
  for (auto _ : state) benchmark::DoNotOptimize(dsl::load_text(text));
}
BENCHMARK(BM_ParseAndLoad);

void BM_ValidateContext(benchmark::State& state) {
  const dsl::Model& m = int_model();
  for (auto _ : state) benchmark::DoNotOptimize(validate_geometric_context(m.site, m.P));
}
BENCHMARK(BM_ValidateContext);

void BM_Sheafify(benchmark::State& state) {
  const dsl::Model& m = int_model();
  PresheafPtr f = m.presheaves.at("two");
  for (auto _ : state) benchmark::DoNotOptimize(sheafify(m.site, f));
}
BENCHMARK(BM_Sheafify);

void BM_IsSheaf(benchmark::State& state) {
  const dsl::Model& m = int_model();
  PresheafPtr a = sheafify(m.site, m.presheaves.at("two")).sheaf;
  for (auto _ : state) benchmark::DoNotOptimize(is_sheaf(m.site, *a));
}
BENCHMARK(BM_IsSheaf);

void BM_OpenImmersion(benchmark::State& state) {
  const dsl::Model& m = int_model();
  GeometricContext ctx = m.context();
  const NatTrans& f = m.morphisms.at("ix");
  for (auto _ : state) benchmark::DoNotOptimize(is_open_immersion(ctx, f));
}
BENCHMARK(BM_OpenImmersion);

void BM_PMorphism(benchmark::State& state) {
  const dsl::Model& m = int_model();
  GeometricContext ctx = m.context();
  const NatTrans& f = m.morphisms.at("ixy");
  for (auto _ : state) benchmark::DoNotOptimize(is_P_morphism_of_sheaves(ctx, ctx.P, f));
}
BENCHMARK(BM_PMorphism);

void BM_GluePseudocircle(benchmark::State& state) {
  const dsl::Model& m = pc_model();
  GeometricContext ctx = m.context();
  const GluingData& d = m.find_glue("pc")->data;
  for (auto _ : state) benchmark::DoNotOptimize(glue(ctx, d));
}
BENCHMARK(BM_GluePseudocircle);

void BM_FindOpenAtlas(benchmark::State& state) {
  const dsl::Model& m = pc_model();
  GeometricContext ctx = m.context();
  PresheafPtr x = glue(ctx, m.find_glue("pc")->data).sheaf;
  for (auto _ : state) benchmark::DoNotOptimize(find_open_atlas(ctx, x));
}
BENCHMARK(BM_FindOpenAtlas);

void BM_FibredProduct(benchmark::State& state) {
  const dsl::Model& m = int_model();
  GeometricContext ctx = m.context();
  const NatTrans& f = m.morphisms.at("ix");
  const NatTrans& g = m.morphisms.at("iy");
  for (auto _ : state) benchmark::DoNotOptimize(scheme_fibred_product(ctx, f, g));
}
BENCHMARK(BM_FibredProduct);

}  // namespace
BENCHMARK_MAIN();
