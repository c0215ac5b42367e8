#include <random>

#include <benchmark/benchmark.h>

#include "eqsep/empirical.hpp"
#include "eqsep/kernels.hpp"
#include "eqsep/separation.hpp"
#include "eqsep/suites.hpp"

using namespace eqsep;

namespace {

kernels::Exec mode(benchmark::State const &state)
{ return state.range(0) ? kernels::Exec::parallel : kernels::Exec::serial; }

SubspaceUnion random_union(std::size_t count, std::size_t ambient,
                           std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> d(-2, 2);
  std::vector<Subspace> members;
  for (std::size_t i = 0; i < count; ++i) {
    RatMatrix m(ambient / 2, ambient);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < ambient; ++c)
        m(r, c) = d(rng);
    members.push_back(Subspace::span(ambient, m));
  }
  return SubspaceUnion::normalize(ambient, std::move(members));
}

void bm_pairwise_intersect(benchmark::State &state)
{
  auto u = random_union(24, 10, 1);
  auto v = random_union(24, 10, 2);
  for (auto _ : state) {
    auto r = state.range(0) ? kernels::pairwise_intersect_parallel(u, v)
                            : kernels::pairwise_intersect_serial(u, v);
    benchmark::DoNotOptimize(r);
  }
}

void bm_absorbed_flags(benchmark::State &state)
{
  auto u = random_union(200, 8, 3);
  std::vector<Subspace> members(u.members());
  for (auto _ : state) {
    auto r = state.range(0) ? kernels::absorbed_flags_parallel(members)
                            : kernels::absorbed_flags_serial(members);
    benchmark::DoNotOptimize(r);
  }
}

void bm_engine_ign3(benchmark::State &state)
{
  auto arch = ign_readout_architecture(3);
  EngineOptions o;
  o.exec = mode(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(rho(arch, o));
}

void bm_mc_separation(benchmark::State &state)
{
  auto arch = regular_orbit_architecture(Subgroup::alternating(symmetric_group(3)));
  std::vector<double> a{1, 2, 3, 4, 5, 6}, b{2, 1, 4, 3, 6, 5};
  OracleOptions o;
  o.samples = 1000;
  o.exec = mode(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_separation(arch, ActivationKind::relu, a, b, o));
}

} // namespace

BENCHMARK(bm_pairwise_intersect)->Arg(0)->Arg(1);
BENCHMARK(bm_absorbed_flags)->Arg(0)->Arg(1);
BENCHMARK(bm_engine_ign3)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_mc_separation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
