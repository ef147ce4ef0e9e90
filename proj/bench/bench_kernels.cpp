// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "hashcoll/eval.hpp"
#include "hashcoll/resample.hpp"

using namespace hashcoll;

namespace {

GrayImage noise(std::size_t h, std::size_t w) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  GrayImage img(h, w);
  for (double& v : img.values()) v = u(rng);
  return img;
}

HashBank random_bank(std::size_t n) {
  std::mt19937_64 rng(2);
  HashBank bank(HashSpec(Algo::PHash, 256));
  for (std::size_t i = 0; i < n; ++i) {
    BitHash h(256, {rng(), rng(), rng(), rng()});
    bank.add("e" + std::to_string(1000000 + i), h);
  }
  return bank;
}

void BM_ResizeSerial(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto img = noise(side, side);
  const Resizer rz(side, side, 32, 32);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::resize_serial(rz, img));
}

void BM_ResizeParallel(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto img = noise(side, side);
  const Resizer rz(side, side, 32, 32);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::resize_parallel(rz, img));
}

void BM_NnSerial(benchmark::State& state) {
  const auto bank = random_bank(static_cast<std::size_t>(state.range(0)));
  const auto probe = bank.hash(7);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::nn_query_serial(bank, probe, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NnParallel(benchmark::State& state) {
  const auto bank = random_bank(static_cast<std::size_t>(state.range(0)));
  const auto probe = bank.hash(7);
  for (auto _ : state) benchmark::DoNotOptimize(nn_query(bank, probe, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

const std::vector<NamedImage>& bench_corpus() {
  static const auto corpus = synth_corpus(64, 3);
  return corpus;
}

void BM_BankSerial(benchmark::State& state) {
  const HashSpec spec(Algo::PHash, 256);
  const auto& corpus = bench_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::build_bank_serial(corpus, spec));
}

void BM_BankParallel(benchmark::State& state) {
  const HashSpec spec(Algo::PHash, 256);
  const auto& corpus = bench_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(build_bank(corpus, spec));
}

}  // namespace

BENCHMARK(BM_ResizeSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_ResizeParallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_NnSerial)->Arg(10000)->Arg(200000);
BENCHMARK(BM_NnParallel)->Arg(10000)->Arg(200000);
BENCHMARK(BM_BankSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BankParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
