#include "lexent/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "lexent/common.hpp"

namespace lexent {

std::vector<LabeledPair> parse_dataset(std::istream& in, const std::string& name) {
  std::vector<LabeledPair> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, '\t');
    auto where = [&] { return name + ":" + std::to_string(line_no); };
    if (fields.size() != 3) {
      throw Error(where() + ": expected word1<TAB>word2<TAB>label, got " +
                  std::to_string(fields.size()) + " field(s)");
    }
    LabeledPair p;
    p.u = std::string(trim(fields[0]));
    p.v = std::string(trim(fields[1]));
    const std::string_view label = trim(fields[2]);
    if (p.u.empty() || p.v.empty()) throw Error(where() + ": empty word");
    if (label == "1") p.entails = true;
    else if (label == "0") p.entails = false;
    else throw Error(where() + ": unknown label '" + std::string(label) + "' (expected 0 or 1)");
    if (!seen.insert({p.u, p.v}).second) {
      throw Error(where() + ": duplicate pair (" + p.u + ", " + p.v + ")");
    }
    if (p.u == p.v) warn(where() + ": pair relates '" + p.u + "' to itself");
    out.push_back(std::move(p));
  }
  if (out.empty()) warn(name + ": dataset is empty");
  return out;
}

std::vector<LabeledPair> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path);
  return parse_dataset(in, path);
}

void write_dataset(std::ostream& out, const std::vector<LabeledPair>& pairs) {
  for (const auto& p : pairs) out << p.u << '\t' << p.v << '\t' << (p.entails ? 1 : 0) << '\n';
}

std::vector<std::size_t> FoldPlan::training_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != fold) out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FoldPlan make_folds(const std::vector<LabeledPair>& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("make_folds: need at least 2 folds");
  if (data.size() < k) {
    throw Error("make_folds: " + std::to_string(data.size()) + " examples cannot fill " +
                std::to_string(k) + " folds");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data[i].entails ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < k) {
      throw Error("make_folds: label " + std::to_string(c) + " has " +
                  std::to_string(by_class[c].size()) + " examples, fewer than " +
                  std::to_string(k) + " folds");
    }
  }
  FoldPlan plan;
  plan.seed = seed;
  plan.folds.resize(k);
  Rng rng(seed);
  // Dealing continues across classes so fold sizes differ by at most one.
  std::size_t next = 0;
  for (int c = 1; c >= 0; --c) {
    rng.shuffle(by_class[c]);
    for (std::size_t i : by_class[c]) {
      plan.folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

ThresholdRule tune_threshold(const std::vector<double>& scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw Error("tune_threshold: length mismatch");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  if (positives == 0 || positives == labels.size()) {
    throw Error("tune_threshold: both classes must be present");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sweep from "everything positive" upward; `correct` counts the current rule.
  const std::size_t n = scores.size();
  std::size_t correct = positives;
  ThresholdRule best{scores[order[0]], true, 0.0};
  std::size_t best_correct = correct;
  double best_margin = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double s = scores[order[i]];
    while (i < n && scores[order[i]] == s) {
      correct += labels[order[i]] ? -1 : 1;
      ++i;
    }
    double t, margin;
    if (i < n) {
      t = (s + scores[order[i]]) / 2.0;
      margin = (scores[order[i]] - s) / 2.0;
    } else {
      t = s;
      margin = 0.0;
    }
    if (correct > best_correct || (correct == best_correct && margin > best_margin)) {
      best = ThresholdRule{t, false, 0.0};
      best_correct = correct;
      best_margin = margin;
    }
  }
  best.training_accuracy = static_cast<double>(best_correct) / static_cast<double>(n);
  return best;
}

double evaluate_accuracy(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) throw Error("evaluate_accuracy: length mismatch");
  if (predictions.empty()) throw Error("evaluate_accuracy: no predictions");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i];
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

std::string to_string(ClusteringBackend b) {
  switch (b) {
    case ClusteringBackend::None: return "none";
    case ClusteringBackend::Correlation: return "correlation";
    case ClusteringBackend::Tiered: return "tiered";
  }
  return "";
}

std::string to_string(ScorerKind s) { return s == ScorerKind::Balapinc ? "balapinc" : "convecs"; }

ClusteringBackend parse_clustering_backend(const std::string& name) {
  if (name == "none") return ClusteringBackend::None;
  if (name == "correlation") return ClusteringBackend::Correlation;
  if (name == "tiered") return ClusteringBackend::Tiered;
  throw Error("unknown clustering backend: " + name);
}

ScorerKind parse_scorer_kind(const std::string& name) {
  if (name == "balapinc") return ScorerKind::Balapinc;
  if (name == "convecs") return ScorerKind::Convecs;
  throw Error("unknown scorer: " + name);
}

void ExperimentConfig::validate() {
  if (scorer == ScorerKind::Balapinc) {
    strategy = to_string(parse_combination_strategy(strategy));
  } else {
    try {
      convecs.eval = parse_eval_strategy(strategy);
    } catch (const Error&) {
      throw Error("strategy '" + strategy + "' is not valid for the convecs scorer");
    }
    strategy = to_string(convecs.eval);
  }
  if (folds < 2) throw Error("config: folds must be at least 2");
  if (latent_dim == 0) throw Error("config: latent_dim must be positive");
  if (feature_list_cap == 0) throw Error("config: feature_cap must be positive");
  if (cluster_feature_cap == 0) throw Error("config: cluster_features must be positive");
  if (!(min_cluster_frac > 0.0 && min_cluster_frac < 1.0)) {
    throw Error("config: min_frac must be in (0, 1)");
  }
  if (convecs.kernel_degree < 1) throw Error("config: kernel_degree must be at least 1");
  if (!(convecs.regularization > 0.0)) throw Error("config: regularization must be positive");
  correlation.validate();
  tiered.validate();
}

CombinationStrategy ExperimentConfig::combination() const { return parse_combination_strategy(strategy); }
EvalStrategy ExperimentConfig::eval_strategy() const { return parse_eval_strategy(strategy); }

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw Error("config: " + key + " expects a boolean, got '" + v + "'");
}

std::size_t parse_count(const std::string& v, const std::string& key) {
  const long long x = parse_int(v, key);
  if (x < 0) throw Error("config: " + key + " must be non-negative");
  return static_cast<std::size_t>(x);
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "dataset") cfg.dataset = v;
  else if (key == "dataset_name") cfg.dataset_name = v;
  else if (key == "occurrences") cfg.occurrences = v;
  else if (key == "taxonomy") cfg.taxonomy = v;
  else if (key == "clustering") cfg.clustering = parse_clustering_backend(v);
  else if (key == "scorer") cfg.scorer = parse_scorer_kind(v);
  else if (key == "strategy") cfg.strategy = v;
  else if (key == "folds") cfg.folds = parse_count(v, key);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(v, key));
  else if (key == "side_tagged") cfg.side_tagged = parse_bool(v, key);
  else if (key == "min_frac") cfg.min_cluster_frac = parse_double(v, key);
  else if (key == "cluster_features") cfg.cluster_feature_cap = parse_count(v, key);
  else if (key == "feature_cap") cfg.feature_list_cap = parse_count(v, key);
  else if (key == "latent_dim") cfg.latent_dim = parse_count(v, key);
  else if (key == "sigma") cfg.correlation.sigma = parse_double(v, key);
  else if (key == "stall_window") cfg.correlation.stall_window = parse_count(v, key);
  else if (key == "min_big_clusters") cfg.correlation.min_big_clusters = parse_count(v, key);
  else if (key == "random_pivot") cfg.correlation.random_pivot = parse_bool(v, key);
  else if (key == "alpha") cfg.tiered.alpha = parse_double(v, key);
  else if (key == "beta") cfg.tiered.beta = parse_double(v, key);
  else if (key == "eta") cfg.tiered.eta = parse_double(v, key);
  else if (key == "iters") cfg.tiered.iterations = parse_count(v, key);
  else if (key == "switch_prior") cfg.tiered.switch_prior = parse_double(v, key);
  else if (key == "eta_role") {
    if (v == "root") cfg.tiered.eta_role = EtaRole::RootTopic;
    else if (v == "level") cfg.tiered.eta_role = EtaRole::LevelPrior;
    else throw Error("eta_role must be 'root' or 'level'");
  }
  else if (key == "kernel_degree") cfg.convecs.kernel_degree = static_cast<int>(parse_int(v, key));
  else if (key == "regularization") cfg.convecs.regularization = parse_double(v, key);
  else if (key == "calibration_folds") cfg.convecs.calibration_folds = parse_count(v, key);
  else if (key == "train_pairs") cfg.convecs.train_pairs.strategy = parse_train_pair_strategy(v);
  else if (key == "least_overlap_negatives") cfg.convecs.train_pairs.least_overlap_negatives = parse_bool(v, key);
  else throw Error("unknown key '" + key + "'");
}

namespace {

std::pair<std::string, std::string> split_entry(std::string_view body) {
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) throw Error("expected key = value");
  return {std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1)))};
}

void parse_entries(std::istream& in, ExperimentConfig& cfg) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    try {
      const auto [key, value] = split_entry(body);
      apply_config_entry(cfg, key, value);
    } catch (const Error& e) {
      throw Error("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  parse_entries(in, cfg);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  ExperimentConfig cfg;
  parse_entries(in, cfg);
  // Paths in the file are relative to the file; overrides are taken as given.
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::string* p : {&cfg.dataset, &cfg.occurrences, &cfg.taxonomy}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).string();
  }
  for (const std::string& kv : overrides) {
    try {
      const auto [key, value] = split_entry(kv);
      apply_config_entry(cfg, key, value);
    } catch (const Error& e) {
      throw Error("override '" + kv + "': " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentData load_experiment_data(const ExperimentConfig& cfg) {
  ExperimentData data;
  if (cfg.dataset.empty()) throw Error("config: dataset is required");
  if (cfg.occurrences.empty()) throw Error("config: occurrences is required");
  data.pairs = load_dataset(cfg.dataset);
  std::ifstream occ(cfg.occurrences);
  if (!occ) throw Error("cannot open occurrences " + cfg.occurrences);
  data.occurrences = read_occurrences(occ);
  if (!cfg.taxonomy.empty()) data.taxonomy = Taxonomy::load(cfg.taxonomy);
  return data;
}

namespace {

std::vector<std::string> dataset_words(const std::vector<LabeledPair>& pairs) {
  std::set<std::string> words;
  for (const auto& p : pairs) {
    words.insert(p.u);
    words.insert(p.v);
  }
  return {words.begin(), words.end()};
}

}  // namespace

std::map<std::string, ClusterSet> cluster_words(const ExperimentConfig& cfg, const ExperimentData& data) {
  const std::vector<std::string> words = dataset_words(data.pairs);
  for (const auto& w : words) {
    auto it = data.occurrences.find(w);
    if (it == data.occurrences.end() || it->second.occurrences.empty()) {
      throw Error("prepare: no occurrences for word '" + w + "'");
    }
  }
  if (cfg.clustering == ClusteringBackend::Correlation && !data.taxonomy) {
    throw Error("prepare: correlation clustering needs a taxonomy");
  }

  std::vector<ClusterSet> results(words.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(words.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      const std::string& w = words[i];
      const OccurrenceSet occs = prune_features(data.occurrences.at(w), cfg.cluster_feature_cap);
      const std::uint64_t seed = mix_seed(cfg.seed, stable_hash(w));
      ClusterSet cs;
      switch (cfg.clustering) {
        case ClusteringBackend::None:
          cs = single_cluster(occs);
          break;
        case ClusteringBackend::Correlation: {
          CorrelationConfig c = cfg.correlation;
          c.seed = seed;
          cs = filter_clusters(correlation_cluster(occs, c, make_llm_similarity(occs, *data.taxonomy)),
                               cfg.min_cluster_frac);
          break;
        }
        case ClusteringBackend::Tiered: {
          TieredConfig t = cfg.tiered;
          t.seed = seed;
          cs = filter_clusters(tiered_cluster(occs, t), cfg.min_cluster_frac);
          break;
        }
      }
      results[i] = std::move(cs);
    } catch (...) {
#pragma omp critical(lexent_cluster_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::map<std::string, ClusterSet> out;
  for (std::size_t i = 0; i < words.size(); ++i) out.emplace(words[i], std::move(results[i]));
  return out;
}

SenseInventory weight_inventory(const SenseInventory& counts, bool side_tagged) {
  std::map<std::string, SparseVector> rows;
  for (const auto& [word, senses] : counts) {
    for (std::size_t i = 0; i < senses.size(); ++i) rows.emplace(sense_label(word, i), senses[i].prototype);
  }
  const SparseMatrix ppmi = ppmi_transform(build_count_matrix(rows, side_tagged));
  SenseInventory out;
  for (const auto& [word, senses] : counts) {
    SenseList& list = out[word];
    for (std::size_t i = 0; i < senses.size(); ++i) {
      list.push_back(Sense{ppmi.row(sense_label(word, i)), senses[i].prior});
    }
  }
  return out;
}

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg, const ExperimentData& data) {
  PreparedExperiment prep;
  prep.pairs = data.pairs;
  prep.clusters = cluster_words(cfg, data);
  for (const auto& [word, cs] : prep.clusters) {
    prep.counts[word] = build_prototypes(cs, context_vectors(data.occurrences.at(word), cfg.side_tagged));
  }
  prep.weighted = weight_inventory(prep.counts, cfg.side_tagged);
  return prep;
}

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FoldResult balapinc_fold(const ExperimentConfig& cfg, const PreparedExperiment& prep,
                         const std::vector<std::size_t>& train, const std::vector<std::size_t>& test) {
  const BalapincScorer scorer(prep.weighted, cfg.feature_list_cap);
  FoldResult result;
  std::string fingerprint;
  for (CombinationStrategy s : {CombinationStrategy::AvgScore, CombinationStrategy::MaxScore,
                                CombinationStrategy::WeightedAvgScore, CombinationStrategy::WeightedMaxScore}) {
    auto scores_of = [&](const std::vector<std::size_t>& idx) {
      std::vector<std::pair<std::string, std::string>> pairs;
      for (std::size_t i : idx) pairs.emplace_back(prep.pairs[i].u, prep.pairs[i].v);
      return scorer.score_all(pairs, s);
    };
    std::vector<bool> train_labels, test_labels;
    for (std::size_t i : train) train_labels.push_back(prep.pairs[i].entails);
    for (std::size_t i : test) test_labels.push_back(prep.pairs[i].entails);
    const ThresholdRule rule = tune_threshold(scores_of(train), train_labels);
    std::vector<double> test_scores = scores_of(test);
    std::vector<bool> predictions;
    for (double x : test_scores) predictions.push_back(rule.predict(x));
    const std::string name = to_string(s);
    result.strategy_accuracy[name] = evaluate_accuracy(predictions, test_labels);
    if (name == cfg.strategy) {
      result.accuracy = result.strategy_accuracy[name];
      result.test_scores = test_scores;
      fingerprint = "threshold:" + format_double(rule.threshold) + (rule.inclusive ? "+" : "");
    }
    result.strategy_scores[name] = std::move(test_scores);
  }
  result.model_fingerprint = fingerprint;
  return result;
}

FoldResult convecs_fold(const ExperimentConfig& cfg, const PreparedExperiment& prep, std::uint64_t seed,
                        const std::vector<std::size_t>& train, const std::vector<std::size_t>& test) {
  std::set<std::string> train_words;
  for (std::size_t i : train) {
    train_words.insert(prep.pairs[i].u);
    train_words.insert(prep.pairs[i].v);
  }
  auto senses_of = [&](const std::string& w) -> const SenseList& {
    auto it = prep.weighted.find(w);
    if (it == prep.weighted.end()) throw Error("convecs: no senses for word '" + w + "'");
    return it->second;
  };

  // The latent space is fit on training-vocabulary senses only.
  SparseMatrix m;
  std::set<std::string> columns;
  for (const std::string& w : train_words) {
    const SenseList& senses = senses_of(w);
    for (std::size_t i = 0; i < senses.size(); ++i) {
      m.labels.push_back(sense_label(w, i));
      m.rows.push_back(senses[i].prototype);
      for (const auto& [f, x] : senses[i].prototype) columns.insert(f);
    }
  }
  m.columns.assign(columns.begin(), columns.end());
  const LatentMatrix latent = truncated_svd(m, cfg.latent_dim, seed);

  const bool need_profiles = cfg.convecs.train_pairs.strategy == TrainPairStrategy::BestOverlap;
  std::map<std::string, std::vector<PreparedVector>> profiles;
  std::map<std::string, LatentSenseList> latent_senses;
  auto latent_of = [&](const std::string& w, bool with_profile) -> const LatentSenseList& {
    auto it = latent_senses.find(w);
    if (it != latent_senses.end()) return it->second;
    const SenseList& senses = senses_of(w);
    LatentSenseList list;
    if (with_profile) {
      auto& prepared = profiles[w];
      for (const Sense& s : senses) prepared.push_back(prepare(s.prototype, s.prior, cfg.feature_list_cap));
    }
    for (std::size_t i = 0; i < senses.size(); ++i) {
      list.push_back(LatentSense{latent.project(senses[i].prototype), senses[i].prior,
                                 with_profile ? &profiles[w][i] : nullptr});
    }
    return latent_senses.emplace(w, std::move(list)).first->second;
  };

  std::vector<PairExample> examples;
  for (std::size_t i : train) {
    const LabeledPair& p = prep.pairs[i];
    examples.push_back(select_training_pair(p.entails, latent_of(p.u, need_profiles),
                                            latent_of(p.v, need_profiles), cfg.convecs.train_pairs));
  }
  ConvecsModel model = train_convecs(examples, cfg.convecs.kernel_degree, cfg.convecs.regularization,
                                     seed, cfg.convecs.calibration_folds);
  model.projection = latent_fingerprint(latent);

  FoldResult result;
  std::vector<bool> labels;
  for (std::size_t i : test) labels.push_back(prep.pairs[i].entails);
  for (EvalStrategy s : {EvalStrategy::AvgScore, EvalStrategy::MaxScore, EvalStrategy::AvgVector}) {
    std::vector<double> scores;
    std::vector<bool> predictions;
    for (std::size_t i : test) {
      const LabeledPair& p = prep.pairs[i];
      const double x = eval_pair(model, latent_of(p.u, false), latent_of(p.v, false), s);
      scores.push_back(x);
      predictions.push_back(x >= 0.5);
    }
    const std::string name = to_string(s);
    result.strategy_accuracy[name] = evaluate_accuracy(predictions, labels);
    if (s == cfg.convecs.eval) {
      result.accuracy = result.strategy_accuracy[name];
      result.test_scores = scores;
    }
    result.strategy_scores[name] = std::move(scores);
  }
  std::ostringstream text;
  write_model(text, model);
  result.model_fingerprint = model.projection + "/model:" + hex64(stable_hash(text.str()));
  return result;
}

}  // namespace

FoldResult run_fold(const ExperimentConfig& cfg, const PreparedExperiment& prep, const FoldPlan& plan,
                    std::size_t fold) {
  if (fold >= plan.k()) throw Error("run_fold: fold index out of range");
  const std::vector<std::size_t> train = plan.training_indices(fold);
  const std::vector<std::size_t>& test = plan.folds[fold];
  try {
    if (cfg.scorer == ScorerKind::Balapinc) return balapinc_fold(cfg, prep, train, test);
    return convecs_fold(cfg, prep, mix_seed(cfg.seed, 0xf01d0000 + fold), train, test);
  } catch (const Error& e) {
    throw Error("fold " + std::to_string(fold + 1) + ": " + e.what());
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg_in, const ExperimentData& data) {
  ExperimentConfig cfg = cfg_in;
  cfg.validate();
  PreparedExperiment prep;
  try {
    prep = prepare_experiment(cfg, data);
  } catch (const Error& e) {
    throw Error(std::string("prepare: ") + e.what());
  }
  const FoldPlan plan = make_folds(prep.pairs, cfg.folds, mix_seed(cfg.seed, 0xf01d));

  ExperimentResult result;
  result.folds.resize(plan.k());
  std::exception_ptr failure;
  const long k = static_cast<long>(plan.k());
#pragma omp parallel for schedule(dynamic, 1)
  for (long f = 0; f < k; ++f) {
    try {
      result.folds[f] = run_fold(cfg, prep, plan, static_cast<std::size_t>(f));
    } catch (...) {
#pragma omp critical(lexent_fold_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ReportRow& row = result.row;
  row.dataset = cfg.dataset_name.empty() ? std::filesystem::path(cfg.dataset).stem().string()
                                         : cfg.dataset_name;
  if (row.dataset.empty()) row.dataset = "dataset";
  row.scorer = to_string(cfg.scorer);
  row.clustering = to_string(cfg.clustering);
  row.strategy = cfg.strategy;
  double sum = 0.0;
  for (const FoldResult& f : result.folds) {
    row.fold_accuracies.push_back(f.accuracy);
    sum += f.accuracy;
  }
  row.accuracy = sum / static_cast<double>(result.folds.size());
  return result;
}

ReportRow run_experiment(ExperimentConfig cfg) {
  cfg.validate();
  return run_experiment(cfg, load_experiment_data(cfg)).row;
}

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  std::size_t k = 0;
  for (const auto& r : rows) k = std::max(k, r.fold_accuracies.size());
  out << "dataset,scorer,clustering,strategy,accuracy";
  for (std::size_t i = 1; i <= k; ++i) out << ",fold" << i;
  out << '\n';
  for (const auto& r : rows) {
    for (const std::string* s : {&r.dataset, &r.scorer, &r.clustering, &r.strategy}) {
      if (s->find(',') != std::string::npos) throw Error("report: field contains a comma: " + *s);
    }
    out << r.dataset << ',' << r.scorer << ',' << r.clustering << ',' << r.strategy << ','
        << format_double(r.accuracy);
    for (std::size_t i = 0; i < k; ++i) {
      out << ',';
      if (i < r.fold_accuracies.size()) out << format_double(r.fold_accuracies[i]);
    }
    out << '\n';
  }
}

std::vector<ReportRow> read_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = split(trim(line), ',');
  if (header.size() < 5 || header[0] != "dataset" || header[4] != "accuracy") {
    throw Error("report: missing header line");
  }
  std::vector<ReportRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != header.size()) {
      throw Error("report line " + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " fields");
    }
    ReportRow r{f[0], f[1], f[2], f[3], parse_double(f[4], "accuracy"), {}};
    for (std::size_t i = 5; i < f.size(); ++i) {
      if (!f[i].empty()) r.fold_accuracies.push_back(parse_double(f[i], "fold accuracy"));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ReportRow> merge_reports(const std::vector<std::vector<ReportRow>>& reports) {
  std::vector<ReportRow> out;
  for (const auto& r : reports) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace lexent
