// Copyright 2026 The ldpn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "ldpn/buchi.hpp"
#include "ldpn/check.hpp"
#include "ldpn/corpus.hpp"
#include "ldpn/dpn_mc.hpp"
#include "ldpn/reduce.hpp"

using namespace ldpn;

namespace {

const char* const kModels[] = {"fig1.ldpn.json", "server_mutex.ldpn.json",
                               "server.ldpn.json"};

void reduce_kernel(benchmark::State& state, bool parallel) {
  const auto m = load_model(*corpus_file(kModels[state.range(0)]));
  ReduceOptions o;
  o.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(reduce_ldpn(m, o).stats.rules);
  state.SetLabel(kModels[state.range(0)]);
}

void BM_ReduceParallel(benchmark::State& s) { reduce_kernel(s, true); }
void BM_ReduceSerial(benchmark::State& s) { reduce_kernel(s, false); }
BENCHMARK(BM_ReduceParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReduceSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

// Backward materialization over every structure of two locks.
void full_kernel(benchmark::State& state, bool parallel) {
  const auto m = load_model(*corpus_file("deadlock_pair.ldpn.json"));
  ReduceOptions o;
  o.parallel = parallel;
  o.full_materialization = true;
  for (auto _ : state) benchmark::DoNotOptimize(reduce_ldpn(m, o).stats.rules);
}

void BM_FullParallel(benchmark::State& s) { full_kernel(s, true); }
void BM_FullSerial(benchmark::State& s) { full_kernel(s, false); }
BENCHMARK(BM_FullParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullSerial)->Unit(benchmark::kMillisecond);

// D_fp on the reduced mutual exclusion model.
void dfp_kernel(benchmark::State& state, bool parallel) {
  const auto m = load_model(*corpus_file("server_mutex.ldpn.json"));
  const auto f = parse_formulas(m, *corpus_file("server_mutex.ltl"));
  const auto reduced = reduce_ldpn(m);
  std::vector<BuchiAutomaton> automata;
  for (const auto& x : f) automata.push_back(build_buchi(x, m.props()));
  const auto products = build_products(reduced.dpn, automata, simple_labeling(reduced.dpn));
  for (auto _ : state)
    benchmark::DoNotOptimize(compute_dfp(reduced.dpn, products, parallel).rounds);
}

void BM_DfpParallel(benchmark::State& s) { dfp_kernel(s, true); }
void BM_DfpSerial(benchmark::State& s) { dfp_kernel(s, false); }
BENCHMARK(BM_DfpParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DfpSerial)->Unit(benchmark::kMillisecond);

void check_kernel(benchmark::State& state, bool parallel) {
  const auto m = load_model(*corpus_file("server.ldpn.json"));
  CheckRequest req;
  req.formulas = parse_formulas(m, *corpus_file("server_starvation.ltl"));
  req.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(check_ldpn(m, req).satisfied);
}

void BM_CheckParallel(benchmark::State& s) { check_kernel(s, true); }
void BM_CheckSerial(benchmark::State& s) { check_kernel(s, false); }
BENCHMARK(BM_CheckParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckSerial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
