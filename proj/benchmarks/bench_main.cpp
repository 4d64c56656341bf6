#include <benchmark/benchmark.h>

#include <random>

#include "corners/complex.hpp"
#include "corners/dual.hpp"
#include "corners/localization.hpp"
#include "corners/operators.hpp"
#include "corners/symbols.hpp"
#include "oracles.hpp"

using namespace corners;

namespace {

void BM_FromPolytopeDodecahedron(benchmark::State& state) {
    const auto inc = testutil::dodecahedron_incidence();
    for (auto _ : state) {
        auto complex = from_polytope(inc, 3);
        benchmark::DoNotOptimize(complex.face_count());
    }
}
BENCHMARK(BM_FromPolytopeDodecahedron);

void BM_DualizeCube(benchmark::State& state) {
    const auto cube = from_polytope(testutil::cube_incidence(), 3);
    for (auto _ : state) {
        auto dual = dualize(cube);
        benchmark::DoNotOptimize(dual.stratum_count());
    }
}
BENCHMARK(BM_DualizeCube);

void BM_QuantizeExtractRoundtrip(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    LatticeModel model{1, N, 2, 1.0};
    std::mt19937 rng(0);
    std::normal_distribution<double> gauss;
    MultiplierSymbol s;
    s.model = model;
    for (int k = 0; k < N; ++k) {
        Eigen::MatrixXcd m(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
        s.values.push_back(std::move(m));
    }
    for (auto _ : state) {
        auto back = extract_symbol(quantize(s));
        benchmark::DoNotOptimize(back.values.front()(0, 0));
    }
}
BENCHMARK(BM_QuantizeExtractRoundtrip)->Arg(16)->Arg(32)->Arg(64);

void BM_RestrictedNorm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridSpace X = GridSpace::interval(n);
    std::mt19937 rng(1);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    ParamFamily A;
    A.Q.push_back(Eigen::VectorXd::Zero(1));
    A.A.push_back(M);
    std::vector<int> U;
    for (int i = 0; i < n / 2; ++i) U.push_back(i);
    for (auto _ : state) benchmark::DoNotOptimize(restricted_norm(A, X, U));
}
BENCHMARK(BM_RestrictedNorm)->Arg(64)->Arg(128);

void BM_BuildRestrictedTupleSquare(benchmark::State& state) {
    const auto square = from_polytope(testutil::square_incidence(), 2);
    auto scalar = [](const Eigen::VectorXd& z) {
        return Eigen::MatrixXcd::Constant(
            1, 1, std::complex<double>(1.0, z.sum()) / (z.cwiseAbs().sum() + 1.0));
    };
    for (auto _ : state) {
        auto tuple = build_restricted_tuple(scalar, square, 1);
        benchmark::DoNotOptimize(tuple.face_symbols.size());
    }
}
BENCHMARK(BM_BuildRestrictedTupleSquare);

void BM_Comp2Square(benchmark::State& state) {
    const auto square = from_polytope(testutil::square_incidence(), 2);
    auto scalar = [](const Eigen::VectorXd& z) {
        return Eigen::MatrixXcd::Constant(
            1, 1, std::complex<double>(1.0, z.sum()) / (z.cwiseAbs().sum() + 1.0));
    };
    const auto tuple = build_restricted_tuple(scalar, square, 1);
    for (auto _ : state) benchmark::DoNotOptimize(check_comp2(tuple, 1e-9).worst);
}
BENCHMARK(BM_Comp2Square);

} // namespace

BENCHMARK_MAIN();
