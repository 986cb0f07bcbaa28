// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "chemeval/fingerprint.hpp"
#include "chemeval/smiles.hpp"
#include "support/corpus.hpp"

using namespace chemeval;

namespace {

const std::vector<std::string> &bench_corpus() {
  static const auto smiles = chemeval::tests::corpus();
  return smiles;
}

void BM_parse(benchmark::State &state) {
  const auto &smiles = bench_corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse(smiles[i % smiles.size()]));
    ++i;
  }
}
BENCHMARK(BM_parse);

void BM_canonicalize(benchmark::State &state) {
  const auto &smiles = bench_corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonicalize(smiles[i % smiles.size()]));
    ++i;
  }
}
BENCHMARK(BM_canonicalize);

void BM_fingerprint(benchmark::State &state) {
  std::vector<Molecule> mols;
  for (const std::string &s : bench_corpus()) {
    mols.push_back(parse(s));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fingerprint(mols[i % mols.size()], 2, 2048));
    ++i;
  }
}
BENCHMARK(BM_fingerprint);

void BM_tanimoto(benchmark::State &state) {
  std::vector<Fingerprint> fps;
  for (const std::string &s : bench_corpus()) {
    fps.push_back(fingerprint(parse(s), 2, 2048));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tanimoto(fps[i % fps.size()], fps[(i + 7) % fps.size()]));
    ++i;
  }
}
BENCHMARK(BM_tanimoto);

void BM_validate(benchmark::State &state) {
  const auto &smiles = bench_corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate(smiles[i % smiles.size()]));
    ++i;
  }
}
BENCHMARK(BM_validate);

} // namespace

BENCHMARK_MAIN();
