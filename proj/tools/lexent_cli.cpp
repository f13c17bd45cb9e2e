#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "lexent/common.hpp"
#include "lexent/corpus.hpp"
#include "lexent/entail.hpp"
#include "lexent/harness.hpp"
#include "lexent/senses.hpp"
#include "lexent/synthetic.hpp"

using namespace lexent;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

// Writes to `path`, or stdout when it is empty or "-".
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
  } else {
    auto out = open_out(path);
    write(out);
  }
}

std::map<std::string, OccurrenceSet> load_occurrences(const std::string& path) {
  auto in = open_in(path);
  return read_occurrences(in);
}

std::set<std::string> load_targets(const std::string& targets_path, const std::string& dataset_path) {
  std::set<std::string> targets;
  if (!targets_path.empty()) {
    auto in = open_in(targets_path);
    for (std::string line; std::getline(in, line);) {
      const auto w = trim(line);
      if (!w.empty() && w.front() != '#') targets.insert(std::string(w));
    }
  }
  if (!dataset_path.empty()) {
    for (const auto& p : load_dataset(dataset_path)) {
      targets.insert(p.u);
      targets.insert(p.v);
    }
  }
  if (targets.empty()) throw Error("ingest: give --targets or --dataset");
  return targets;
}

struct Options {
  std::uint64_t seed = 0;

  std::string corpus, targets, dataset, out;
  std::size_t window = kDefaultWindow, sample = kDefaultSampleSize, feature_cap = kDefaultFeatureCap;

  std::string occurrences, taxonomy, backend = "correlation";
  std::vector<std::string> words;
  CorrelationConfig correlation;
  TieredConfig tiered;

  std::string clusters, inventory;
  double min_frac = kDefaultMinClusterFrac;
  bool side_tagged = false;

  std::string pairs, u, v, strategy = "AvgScore";
  std::size_t list_cap = kDefaultFeatureListCap;

  std::string config;
  std::vector<std::string> overrides;
  std::vector<std::string> reports;

  std::string synth_dir;
  synth::PolysemySpec polysemy;
};

void run_ingest(const Options& o) {
  auto in = open_in(o.corpus);
  const auto corpus = read_corpus(in);
  const auto targets = load_targets(o.targets, o.dataset);
  const auto sets = ingest_corpus(corpus, targets, o.window, o.sample);
  for (const auto& t : targets) {
    if (!sets.count(t)) warn("ingest: target '" + t + "' does not occur in the corpus");
  }
  emit(o.out, [&](std::ostream& out) { write_occurrences(out, sets); });
}

void run_cluster(const Options& o) {
  const auto occs = load_occurrences(o.occurrences);
  const ClusteringBackend backend = parse_clustering_backend(o.backend);
  if (backend == ClusteringBackend::None) throw Error("cluster: backend must be correlation or tiered");
  std::optional<Taxonomy> taxonomy;
  if (backend == ClusteringBackend::Correlation) {
    if (o.taxonomy.empty()) throw Error("cluster: correlation clustering needs --taxonomy");
    taxonomy = Taxonomy::load(o.taxonomy);
  }
  std::vector<std::string> words = o.words;
  if (words.empty()) {
    for (const auto& [w, s] : occs) words.push_back(w);
  }
  std::vector<ClusterSet> sets;
  for (const auto& w : words) {
    auto found = occs.find(w);
    if (found == occs.end()) throw Error("cluster: no occurrences for '" + w + "'");
    const OccurrenceSet pruned = prune_features(found->second, o.feature_cap);
    const std::uint64_t seed = mix_seed(o.seed, stable_hash(w));
    if (backend == ClusteringBackend::Correlation) {
      CorrelationConfig c = o.correlation;
      c.seed = seed;
      sets.push_back(correlation_cluster(pruned, c, make_llm_similarity(pruned, *taxonomy)));
    } else {
      TieredConfig t = o.tiered;
      t.seed = seed;
      sets.push_back(tiered_cluster(pruned, t));
    }
  }
  emit(o.out, [&](std::ostream& out) { write_cluster_sets(out, sets); });
}

void run_prototypes(const Options& o) {
  const auto occs = load_occurrences(o.occurrences);
  std::map<std::string, ClusterSet> clusters;
  if (!o.clusters.empty()) {
    auto in = open_in(o.clusters);
    for (auto& cs : read_cluster_sets(in, occs)) clusters[cs.target] = std::move(cs);
  }
  SenseInventory inventory;
  for (const auto& [w, set] : occs) {
    auto it = clusters.find(w);
    const ClusterSet cs = it == clusters.end() ? single_cluster(set) : filter_clusters(it->second, o.min_frac);
    inventory[w] = build_prototypes(cs, context_vectors(set, o.side_tagged));
  }
  auto matrix = open_out(o.inventory + ".matrix");
  auto priors = open_out(o.inventory + ".priors");
  write_inventory(matrix, priors, inventory);
}

void run_score(const Options& o) {
  auto matrix = open_in(o.inventory + ".matrix");
  auto priors = open_in(o.inventory + ".priors");
  const SenseInventory weighted = weight_inventory(read_inventory(matrix, priors), o.side_tagged);
  const CombinationStrategy strategy = parse_combination_strategy(o.strategy);
  const BalapincScorer scorer(weighted, o.list_cap);

  std::vector<std::pair<std::string, std::string>> pairs;
  if (!o.u.empty() || !o.v.empty()) {
    if (o.u.empty() || o.v.empty()) throw Error("score: give both --u and --v");
    pairs.emplace_back(o.u, o.v);
  }
  if (!o.pairs.empty()) {
    auto in = open_in(o.pairs);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      const auto body = trim(line);
      if (body.empty() || body.front() == '#') continue;
      const auto f = split(body, '\t');
      if (f.size() < 2) throw Error(o.pairs + ":" + std::to_string(line_no) + ": expected word1<TAB>word2");
      pairs.emplace_back(f[0], f[1]);
    }
  }
  for (const auto& [a, b] : pairs) {
    for (const std::string& w : {a, b}) {
      if (!scorer.has_word(w)) throw Error("score: '" + w + "' is not in the inventory");
    }
  }
  const auto scores = scorer.score_all(pairs, strategy);
  std::vector<ScoreLine> lines;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    lines.push_back(ScoreLine{pairs[i].first, pairs[i].second, to_string(strategy), scores[i]});
  }
  emit(o.out, [&](std::ostream& out) { write_score_dump(out, lines); });
}

void run_eval(const Options& o, bool seed_given) {
  ExperimentConfig cfg = load_experiment_config(o.config, o.overrides);
  if (seed_given) cfg.seed = o.seed;
  const ReportRow row = run_experiment(cfg);
  emit(o.out, [&](std::ostream& out) { write_report(out, {row}); });
}

void run_report(const Options& o) {
  std::vector<std::vector<ReportRow>> all;
  for (const auto& path : o.reports) {
    auto in = open_in(path);
    try {
      all.push_back(read_report(in));
    } catch (const Error& e) {
      throw Error(path + ": " + e.what());
    }
  }
  emit(o.out, [&](std::ostream& out) { write_report(out, merge_reports(all)); });
}

void run_synth(const Options& o, bool seed_given) {
  synth::PolysemySpec spec = o.polysemy;
  if (seed_given) spec.seed = o.seed;
  const auto bench = synth::polysemy_benchmark(spec);
  const std::filesystem::path dir(o.synth_dir);
  std::filesystem::create_directories(dir);
  {
    auto out = open_out((dir / "corpus.txt").string());
    for (const auto& s : bench.corpus) out << join(s, " ") << '\n';
  }
  {
    auto out = open_out((dir / "pairs.tsv").string());
    out << "# hyponym/hypernym pairs; polysemous: " << join(bench.polysemous_words, " ") << '\n';
    write_dataset(out, bench.pairs);
  }
  {
    auto out = open_out((dir / "taxonomy.tsv").string());
    out << bench.taxonomy_text;
  }
  std::cout << "wrote " << bench.corpus.size() << " sentences and " << bench.pairs.size() << " pairs to "
            << dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexical entailment with multi-prototype word vectors"};
  app.require_subcommand(1);
  Options o;
  auto* seed_opt = app.add_option("--seed", o.seed, "Global random seed");

  auto* ingest = app.add_subcommand("ingest", "Corpus -> occurrence file");
  ingest->add_option("--corpus", o.corpus, "Plain text, one sentence per line")->required();
  ingest->add_option("--targets", o.targets, "Target words, one per line");
  ingest->add_option("--dataset", o.dataset, "Take targets from a pair dataset");
  ingest->add_option("--window", o.window, "Context tokens on each side")->capture_default_str();
  ingest->add_option("--sample", o.sample, "Occurrences kept per target")->capture_default_str();
  ingest->add_option("--out,-o", o.out, "Output file (default stdout)");

  auto* cluster = app.add_subcommand("cluster", "Occurrences -> cluster sets");
  cluster->add_option("--occurrences", o.occurrences)->required();
  cluster->add_option("--backend", o.backend)->check(CLI::IsMember({"correlation", "tiered"}))->capture_default_str();
  cluster->add_option("--taxonomy", o.taxonomy, "Taxonomy file for correlation clustering");
  cluster->add_option("--words", o.words, "Only cluster these targets");
  cluster->add_option("--feature-cap", o.feature_cap, "Context types kept per target")->capture_default_str();
  cluster->add_option("--sigma", o.correlation.sigma)->capture_default_str();
  cluster->add_option("--stall-window", o.correlation.stall_window)->capture_default_str();
  cluster->add_option("--min-big-clusters", o.correlation.min_big_clusters)->capture_default_str();
  cluster->add_flag("--random-pivot", o.correlation.random_pivot);
  cluster->add_option("--alpha", o.tiered.alpha)->capture_default_str();
  cluster->add_option("--beta", o.tiered.beta)->capture_default_str();
  cluster->add_option("--eta", o.tiered.eta)->capture_default_str();
  cluster->add_option("--iters", o.tiered.iterations)->capture_default_str();
  cluster->add_option("--switch-prior", o.tiered.switch_prior)->capture_default_str();
  cluster->add_option("--out,-o", o.out);

  auto* protos = app.add_subcommand("prototypes", "Cluster sets -> sense inventory");
  protos->add_option("--occurrences", o.occurrences)->required();
  protos->add_option("--clusters", o.clusters, "Cluster file; words without clusters get one sense");
  protos->add_option("--min-frac", o.min_frac)->capture_default_str();
  protos->add_flag("--side-tagged", o.side_tagged, "Keep left/right contexts apart");
  protos->add_option("--out,-o", o.inventory, "Output prefix (.matrix and .priors)")->required();

  auto* score = app.add_subcommand("score", "balAPinc scores for word pairs");
  score->add_option("--inventory", o.inventory, "Inventory prefix from `prototypes`")->required();
  score->add_option("--pairs", o.pairs, "word1<TAB>word2 lines");
  score->add_option("--u", o.u);
  score->add_option("--v", o.v);
  score->add_option("--strategy", o.strategy)->capture_default_str();
  score->add_option("--cap", o.list_cap, "Ranked feature list length")->capture_default_str();
  score->add_flag("--side-tagged", o.side_tagged);
  score->add_option("--out,-o", o.out);

  auto* eval = app.add_subcommand("eval", "Cross-validated experiment from a config file");
  eval->add_option("--config", o.config)->required();
  eval->add_option("--set", o.overrides, "Override a config entry, key=value");
  eval->add_option("--out,-o", o.out);

  auto* report = app.add_subcommand("report", "Merge report files");
  report->add_option("reports", o.reports)->required();
  report->add_option("--out,-o", o.out);

  auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic polysemy benchmark");
  synth_cmd->add_option("--dir", o.synth_dir)->required();
  synth_cmd->add_option("--domains", o.polysemy.domains)->capture_default_str();
  synth_cmd->add_option("--hyponyms", o.polysemy.hyponyms_per_domain)->capture_default_str();
  synth_cmd->add_option("--polysemous-share", o.polysemy.polysemous_share)->capture_default_str();
  synth_cmd->add_option("--sentences", o.polysemy.sentences_per_word)->capture_default_str();
  synth_cmd->add_option("--minor-share", o.polysemy.minor_sense_share)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const bool seed_given = seed_opt->count() > 0;
  try {
    if (*ingest) run_ingest(o);
    else if (*cluster) run_cluster(o);
    else if (*protos) run_prototypes(o);
    else if (*score) run_score(o);
    else if (*eval) run_eval(o, seed_given);
    else if (*report) run_report(o);
    else if (*synth_cmd) run_synth(o, seed_given);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
