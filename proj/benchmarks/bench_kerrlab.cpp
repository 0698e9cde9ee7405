#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "kerrlab/fock.hpp"
#include "kerrlab/lindblad.hpp"
#include "kerrlab/protocols.hpp"
#include "kerrlab/spectrum.hpp"

using namespace kerrlab;

namespace {

SKParams sk(double eps2) {
  SKParams p;
  p.eps2 = eps2;
  return p;
}

DissipationParams weak_loss() {
  DissipationParams d;
  d.kappa1 = 0.025;
  d.n_th = 0.01;
  return d;
}

void BM_Diagonalize(benchmark::State& state) {
  const HilbertSpace s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(sk(6.0), s));
}
BENCHMARK(BM_Diagonalize)->Arg(40)->Arg(80)->Arg(160);

void BM_LindbladianApply(benchmark::State& state) {
  const HilbertSpace s(static_cast<int>(state.range(0)));
  const CMatrix H = build_hamiltonian(sk(4.0), s).matrix();
  const CMatrix rho = DensityMatrix(coherent(s, 2.0)).matrix();
  const DissipationParams d = weak_loss();
  for (auto _ : state) benchmark::DoNotOptimize(lindbladian_apply(rho, H, d));
}
BENCHMARK(BM_LindbladianApply)->Arg(20)->Arg(40);

void BM_Wigner(benchmark::State& state) {
  const HilbertSpace s(40);
  const DensityMatrix rho(cat(s, 2.0, CatParity::Even));
  const PhaseGrid g = PhaseGrid::square(5.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wigner_of(rho, g));
}
BENCHMARK(BM_Wigner)->Arg(61)->Arg(121);

void BM_EffLindbladian(benchmark::State& state) {
  const HilbertSpace s(30);
  const DissipationParams d = weak_loss();
  for (auto _ : state) benchmark::DoNotOptimize(eff_lindbladian(sk(6.0), d, 3, s));
}
BENCHMARK(BM_EffLindbladian)->Unit(benchmark::kMillisecond);

void BM_FullLindbladSpectrum(benchmark::State& state) {
  const HilbertSpace s(static_cast<int>(state.range(0)));
  const DissipationParams d = weak_loss();
  for (auto _ : state) benchmark::DoNotOptimize(lindbladian_spectrum_full(sk(3.0), d, s));
}
BENCHMARK(BM_FullLindbladSpectrum)->Arg(14)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CoherentLifetime(benchmark::State& state) {
  const HilbertSpace s(20);
  const DissipationParams d = weak_loss();
  for (auto _ : state) benchmark::DoNotOptimize(coherent_lifetime(sk(3.0), d, s, 100.0));
}
BENCHMARK(BM_CoherentLifetime)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_ReadoutSim(benchmark::State& state) {
  ReadoutParams ro;
  ro.g_bs = Complex(0.0, 0.2);
  ro.kappa_r = 1.0;
  ro.tau = 5.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(readout_record_sim(2000.0, ro, 2.0, 10000, 10, 1));
}
BENCHMARK(BM_ReadoutSim)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
