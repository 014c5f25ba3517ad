#include <benchmark/benchmark.h>

#include "bosonet/simulation.hpp"

using namespace bosonet;

namespace {

// Two damped oscillators, even cat, `levels` per oscillator.
struct Fixture {
  explicit Fixture(int levels)
      : basis(FockBasis::uniform(2, levels)),
        gen(basis, h(), gamma(), {}, 1.0),
        rho(ComplexMatrix::Zero(static_cast<Eigen::Index>(basis.dimension()),
                                static_cast<Eigen::Index>(basis.dimension()))) {
    ComplexMatrix labels(2, 2);
    labels << 1.0, 0.0, -1.0, 0.0;
    ComplexVector amps(2);
    amps << 1.0, 1.0;
    const auto dm = build_hd(h(), gamma());
    rho = to_density_matrix(evolve_coherent(normalize_superposition(amps, labels), propagator(dm, 0.0)), basis);
  }
  static RealMatrix h() {
    RealMatrix m(2, 2);
    m << 1.0, 0.1, 0.1, 1.0;
    return m;
  }
  static RealMatrix gamma() {
    RealMatrix m = RealMatrix::Zero(2, 2);
    m(0, 0) = 0.1;
    m(1, 1) = 0.04;
    return m;
  }
  FockBasis basis;
  oracle::LindbladGenerator gen;
  ComplexMatrix rho;
};

void BM_Parallel(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  ComplexMatrix out(f.rho.rows(), f.rho.cols());
  for (auto _ : state) {
    oracle::apply_generator(f.gen, f.rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_ParallelHermitian(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  ComplexMatrix out(f.rho.rows(), f.rho.cols());
  for (auto _ : state) {
    oracle::apply_generator_hermitian(f.gen, f.rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_SerialReference(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::apply_generator_reference(f.gen, f.rho));
}

void BM_ClosedFormPoint(benchmark::State& state) {
  auto spec = generate_topology(TopologyKind::symmetric, static_cast<int>(state.range(0)), 1.0, 0.1);
  attach_white_noise(spec, 0.02);
  validate(spec);
  ComplexMatrix labels = ComplexMatrix::Zero(2, spec.n);
  labels(0, 0) = 1.0;
  labels(1, 0) = -1.0;
  ComplexVector amps(2);
  amps << 1.0, 1.0;
  const auto cat = normalize_superposition(amps, labels);
  SimulationSettings s;
  s.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(spec, cat, {5.0}, s));
}

}  // namespace

BENCHMARK(BM_Parallel)->Arg(8)->Arg(16)->Arg(25)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ParallelHermitian)->Arg(8)->Arg(16)->Arg(25)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SerialReference)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ClosedFormPoint)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
