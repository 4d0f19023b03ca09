#include <benchmark/benchmark.h>

#include "bfmix/eigensolver.hpp"
#include "bfmix/fock_basis.hpp"
#include "bfmix/lattice.hpp"
#include "bfmix/operators.hpp"
#include "bfmix/potentials.hpp"
#include "bfmix/radial.hpp"
#include "bfmix/scattering.hpp"

using namespace bfmix;

namespace {

FourierPotential single_mode() {
    return FourierPotential::from_coefficients({{{1, 0, 0}, 1.0}, {{-1, 0, 0}, 1.0}}, 1);
}

void BM_LuneSumDirect(benchmark::State& state) {
    const auto kF = FermiRadius::from_squared(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lattice::resolvent_sum_direct(1.0, {1, 0, 0}, kF).value);
    state.SetLabel("kF^2 = " + std::to_string(state.range(0)));
}
BENCHMARK(BM_LuneSumDirect)->Arg(100)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);

void BM_LuneSumExact(benchmark::State& state) {
    const auto kF = FermiRadius::from_squared(1);
    for (auto _ : state) benchmark::DoNotOptimize(lattice::resolvent_sum_exact(1, {1, 0, 0}, kF));
}
BENCHMARK(BM_LuneSumExact)->Unit(benchmark::kMicrosecond);

void BM_HamiltonianApply(benchmark::State& state) {
    const auto kF = FermiRadius::from_squared(state.range(0));
    const FockBasis basis(ModeSet::ball(default_cutoff2(kF), kF), ModeSet::ball(1), {2, 1, Vec3i{0, 0, 0}});
    const auto V = single_mode();
    const OperatorHandle H(basis, OpKind::H, {V, V, potentials::lambda_coupling(2, kF)});
    Eigen::VectorXd x = Eigen::VectorXd::Ones(Eigen::Index(basis.dim())), y(Eigen::Index(basis.dim()));
    for (auto _ : state) {
        H.apply(x.data(), y.data());
        benchmark::DoNotOptimize(y.data());
    }
    state.counters["dim"] = double(basis.dim());
}
BENCHMARK(BM_HamiltonianApply)->Arg(4)->Arg(16)->Arg(36)->Unit(benchmark::kMicrosecond);

FockBasis two_pair_basis() {
    const auto kF = FermiRadius::from_squared(1);
    return FockBasis(ModeSet::ball(4, kF), ModeSet::ball(1), {2, 2, Vec3i{0, 0, 0}});
}

void BM_LanczosLowest(benchmark::State& state) {
    const FockBasis basis = two_pair_basis();
    const auto V = single_mode();
    const OperatorHandle H(basis, OpKind::H, {V, V, potentials::lambda_coupling(2, FermiRadius::from_squared(1))});
    EigenOptions o;
    o.count = int(state.range(0));
    o.dense_threshold = 0;
    for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenvalues(as_linear_operator(H), o).values);
    state.counters["dim"] = double(basis.dim());
}
BENCHMARK(BM_LanczosLowest)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BlockSplitLowest(benchmark::State& state) {
    const FockBasis basis = two_pair_basis();
    const auto V = single_mode();
    const OperatorHandle H(basis, OpKind::H, {V, V, potentials::lambda_coupling(2, FermiRadius::from_squared(1))});
    EigenOptions o;
    o.count = 1;
    o.dense_threshold = std::size_t(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenvalues(H, o).values);
    state.counters["dim"] = double(basis.dim());
}
BENCHMARK(BM_BlockSplitLowest)->Arg(0)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RadialConvolution(benchmark::State& state) {
    const auto v = RadialPotential::sample([](double r) { return 1.0 - r; }, 1.0, std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(scattering::radial_convolution(v, v).values());
}
BENCHMARK(BM_RadialConvolution)->Arg(65)->Arg(513)->Unit(benchmark::kMillisecond);

void BM_ScatteringLength(benchmark::State& state) {
    const auto w = RadialPotential::indicator(1.0, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(scattering::scattering_length(w).a);
}
BENCHMARK(BM_ScatteringLength)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
