#pragma once

// Datasets, stratified k-fold cross-validation, threshold tuning and the
// end-to-end experiment pipeline behind the `eval` command.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexent/convecs.hpp"
#include "lexent/corpus.hpp"
#include "lexent/entail.hpp"
#include "lexent/lexsim.hpp"
#include "lexent/senses.hpp"

namespace lexent {

struct LabeledPair {
  std::string u;
  std::string v;
  bool entails = false;
};

// `word1 \t word2 \t {0,1}` per line; `#` lines and blank lines are skipped.
std::vector<LabeledPair> parse_dataset(std::istream& in, const std::string& name = "dataset");
std::vector<LabeledPair> load_dataset(const std::string& path);
void write_dataset(std::ostream& out, const std::vector<LabeledPair>& pairs);

struct FoldPlan {
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> folds;  // indices, ascending within a fold

  std::size_t k() const { return folds.size(); }
  std::vector<std::size_t> training_indices(std::size_t fold) const;
};

FoldPlan make_folds(const std::vector<LabeledPair>& data, std::size_t k, std::uint64_t seed);

// Predict "entails" when score > threshold, or score == threshold if
// `inclusive`. The inclusive flag only matters for the all-positive rule.
struct ThresholdRule {
  double threshold = 0.0;
  bool inclusive = false;
  double training_accuracy = 0.0;

  bool predict(double score) const {
    return score > threshold || (inclusive && score == threshold);
  }
};

ThresholdRule tune_threshold(const std::vector<double>& scores, const std::vector<bool>& labels);

double evaluate_accuracy(const std::vector<bool>& predictions, const std::vector<bool>& labels);

enum class ClusteringBackend { None, Correlation, Tiered };
enum class ScorerKind { Balapinc, Convecs };

std::string to_string(ClusteringBackend b);
std::string to_string(ScorerKind s);
ClusteringBackend parse_clustering_backend(const std::string& name);
ScorerKind parse_scorer_kind(const std::string& name);

struct ExperimentConfig {
  std::string dataset;      // path of the labeled pair file
  std::string dataset_name; // report label; defaults to the dataset file stem
  std::string occurrences;  // occurrence file from `ingest`
  std::string taxonomy;     // taxonomy file, needed by correlation clustering
  ClusteringBackend clustering = ClusteringBackend::None;
  ScorerKind scorer = ScorerKind::Balapinc;
  std::string strategy = "AvgScore";
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  bool side_tagged = false;
  double min_cluster_frac = kDefaultMinClusterFrac;
  std::size_t cluster_feature_cap = kDefaultFeatureCap;  // pruning applied before clustering
  std::size_t feature_list_cap = kDefaultFeatureListCap;
  std::size_t latent_dim = kDefaultLatentDim;
  CorrelationConfig correlation;
  TieredConfig tiered;
  ConvecsConfig convecs;

  // Checks that the strategy suits the scorer and fills in the typed field.
  void validate();
  CombinationStrategy combination() const;
  EvalStrategy eval_strategy() const;
};

// `key = value` lines; `#` comments. Unknown keys are errors.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);
ExperimentConfig parse_experiment_config(std::istream& in);
// Relative paths in the file resolve against the file's directory.
// `overrides` are extra `key=value` entries applied afterwards.
ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides = {});

struct ExperimentData {
  std::vector<LabeledPair> pairs;
  std::map<std::string, OccurrenceSet> occurrences;  // sampled, unpruned, per word
  std::optional<Taxonomy> taxonomy;
};

ExperimentData load_experiment_data(const ExperimentConfig& cfg);

// Label-free artifacts shared by every fold: raw sense prototypes and their
// PPMI-weighted versions, indexed by word.
struct PreparedExperiment {
  std::vector<LabeledPair> pairs;
  std::map<std::string, ClusterSet> clusters;
  SenseInventory counts;
  SenseInventory weighted;
};

std::map<std::string, ClusterSet> cluster_words(const ExperimentConfig& cfg, const ExperimentData& data);
SenseInventory weight_inventory(const SenseInventory& counts, bool side_tagged);
PreparedExperiment prepare_experiment(const ExperimentConfig& cfg, const ExperimentData& data);

struct FoldResult {
  double accuracy = 0.0;
  std::vector<double> test_scores;  // configured strategy, in fold order
  std::map<std::string, std::vector<double>> strategy_scores;
  std::map<std::string, double> strategy_accuracy;
  std::string model_fingerprint;  // identifies everything fitted on the training part
};

FoldResult run_fold(const ExperimentConfig& cfg, const PreparedExperiment& prep, const FoldPlan& plan,
                    std::size_t fold);

struct ReportRow {
  std::string dataset;
  std::string scorer;
  std::string clustering;
  std::string strategy;
  double accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

struct ExperimentResult {
  ReportRow row;
  std::vector<FoldResult> folds;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentData& data);
ReportRow run_experiment(ExperimentConfig cfg);

// dataset,scorer,clustering,strategy,accuracy,fold1..foldK
void write_report(std::ostream& out, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report(std::istream& in);
// Concatenates rows; the header is widened to the largest fold count.
std::vector<ReportRow> merge_reports(const std::vector<std::vector<ReportRow>>& reports);

}  // namespace lexent
