// Serial reference vs OpenMP versions of the parallel kernels.
#include <benchmark/benchmark.h>

#include <set>

#include "lexent/common.hpp"
#include "lexent/entail.hpp"
#include "lexent/harness.hpp"
#include "lexent/lexsim.hpp"
#include "lexent/senses.hpp"
#include "lexent/svm.hpp"
#include "lexent/synthetic.hpp"
#include "lexent/vsm.hpp"

using namespace lexent;

namespace {

// Shared fixture: the default synthetic benchmark, prepared once.
struct Fixture {
  synth::PolysemyBenchmark bench;
  ExperimentData data;
  CountMatrix counts;
  SenseInventory weighted;
  std::vector<std::pair<std::string, std::string>> pairs;

  Fixture() {
    set_warning_handler([](std::string_view) {});
    bench = synth::polysemy_benchmark(synth::PolysemySpec{});
    data.pairs = bench.pairs;
    std::set<std::string> words;
    for (const auto& p : data.pairs) {
      words.insert({p.u, p.v});
      pairs.emplace_back(p.u, p.v);
    }
    data.occurrences = ingest_corpus(bench.corpus, words);
    data.taxonomy = bench.taxonomy;
    ExperimentConfig cfg;
    const auto prep = prepare_experiment(cfg, data);
    std::map<std::string, SparseVector> rows;
    for (const auto& [w, senses] : prep.counts) rows.emplace(w, senses.front().prototype);
    counts = build_count_matrix(rows);
    weighted = prep.weighted;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_ppmi(benchmark::State& st) {
  const auto& m = fixture().counts;
  for (auto _ : st) benchmark::DoNotOptimize(st.range(0) ? ppmi_transform(m) : ppmi_transform_serial(m));
}

void BM_similarity_table(benchmark::State& st) {
  const auto& t = *fixture().data.taxonomy;
  const auto words = t.words();
  const auto metric = wu_palmer_metric(t);
  for (auto _ : st) {
    benchmark::DoNotOptimize(st.range(0) ? build_similarity_table(words, metric)
                                         : build_similarity_table_serial(words, metric));
  }
}

void BM_correlation(benchmark::State& st) {
  const auto& f = fixture();
  const OccurrenceSet& occs = f.data.occurrences.at("topic0");
  const auto sim = make_llm_similarity(occs, *f.data.taxonomy);
  CorrelationConfig cfg;
  for (auto _ : st) {
    benchmark::DoNotOptimize(st.range(0) ? correlation_cluster(occs, cfg, sim)
                                         : correlation_cluster_serial(occs, cfg, sim));
  }
}

void BM_balapinc(benchmark::State& st) {
  const auto& f = fixture();
  const BalapincScorer scorer(f.weighted);
  for (auto _ : st) {
    benchmark::DoNotOptimize(st.range(0) ? scorer.score_all(f.pairs, CombinationStrategy::AvgScore)
                                         : scorer.score_all_serial(f.pairs, CombinationStrategy::AvgScore));
  }
}

void BM_gram(benchmark::State& st) {
  Rng r(1);
  std::vector<Dense> xs(600, Dense(200));
  for (auto& x : xs) {
    for (double& v : x) v = r.normal();
    x = normalized(x);
  }
  for (auto _ : st) benchmark::DoNotOptimize(st.range(0) ? gram_matrix(xs, 2) : gram_matrix_serial(xs, 2));
}

}  // namespace

// Arg 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_ppmi)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_similarity_table)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_correlation)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_balapinc)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gram)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
