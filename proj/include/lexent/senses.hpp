#pragma once

// Word sense induction. Two clusterers over a word's occurrences (greedy
// threshold "correlation" clustering and a depth-2 tiered CRP mixture fitted
// by collapsed Gibbs sampling), cluster filtering, and prototype building.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexent/corpus.hpp"
#include "lexent/lexsim.hpp"
#include "lexent/vsm.hpp"

namespace lexent {

struct CorrelationConfig {
  double sigma = 0.85;
  double min_cluster_frac = 0.025;
  std::size_t stall_window = 5;
  std::size_t min_big_clusters = 2;
  // Pivot = lowest unassigned index unless set, in which case it is drawn
  // uniformly from the unassigned points using `seed`.
  bool random_pivot = false;
  std::uint64_t seed = 0;

  void validate() const;
};

// Which distribution the third hyperparameter smooths. RootTopic (default):
// eta is the Dirichlet smoothing of the shared root topic, beta that of the
// cluster topics, and each occurrence's root/cluster switch has a symmetric
// Beta(switch_prior) prior. LevelPrior: eta is the switch prior and beta
// smooths every topic.
enum class EtaRole { RootTopic, LevelPrior };

struct TieredConfig {
  double alpha = 1.0;
  double beta = 0.1;
  double eta = 0.01;
  std::size_t iterations = 12000;
  std::uint64_t seed = 0;
  EtaRole eta_role = EtaRole::RootTopic;
  // Depth-2 slice of the usual GEM(mean 0.5, scale 100) level prior.
  double switch_prior = 50.0;

  void validate() const;
};

struct ClusterSet {
  std::string target;
  // Source id of every clustered occurrence, by occurrence index.
  std::vector<std::string> source_ids;
  // Occurrence indices per cluster, each ascending.
  std::vector<std::vector<std::size_t>> clusters;
  // Mass the priors are normalised by: the summed size of all clusters the
  // clusterer produced, before any filtering.
  double total_mass = 0.0;
  // Tiered only: per occurrence, per pruned token, true if assigned to root.
  std::optional<std::vector<std::vector<bool>>> root_tokens;
  std::optional<double> log_joint;
  // Tiered only: joint log probability of the initial state and after every
  // iteration.
  std::vector<double> log_joint_trace;

  std::size_t occurrence_count() const { return source_ids.size(); }
  // Cluster index per occurrence for disjoint clusterings; -1 if unassigned.
  // Throws if an occurrence is in two clusters.
  std::vector<int> labels() const;
};

using BagSimilarity =
    std::function<double(const std::vector<std::string>&, const std::vector<std::string>&)>;

// LLM over Wu-Palmer, served from a word table built over the occurrence
// set's tokens. Safe to call concurrently.
BagSimilarity make_llm_similarity(const OccurrenceSet& occs, const Taxonomy& taxonomy);

// Greedy pivot clustering on the occurrences' merged context bags. Pivot rows
// are evaluated in parallel, so `sim` must be thread-safe.
ClusterSet correlation_cluster(const OccurrenceSet& occs, const CorrelationConfig& cfg,
                               const BagSimilarity& sim);
ClusterSet correlation_cluster_serial(const OccurrenceSet& occs, const CorrelationConfig& cfg,
                                      const BagSimilarity& sim);

// Collapsed Gibbs sampler for the tiered model. Expects pruned (merged)
// occurrences. Returns the best-scoring state visited.
ClusterSet tiered_cluster(const OccurrenceSet& occs, const TieredConfig& cfg);

// Log joint probability of a given tiered state, computed from scratch.
double tiered_log_joint(const OccurrenceSet& occs, const TieredConfig& cfg,
                        const std::vector<int>& cluster_of,
                        const std::vector<std::vector<bool>>& root_tokens);

inline constexpr double kDefaultMinClusterFrac = 0.025;

// Drops clusters holding less than `min_frac` of the occurrences. If nothing
// survives, returns one cluster with every occurrence.
ClusterSet filter_clusters(const ClusterSet& cs, double min_frac);

// Puts every occurrence in one cluster (the single-prototype baseline).
ClusterSet single_cluster(const OccurrenceSet& occs);

struct Sense {
  SparseVector prototype;
  double prior = 0.0;
};

using SenseList = std::vector<Sense>;
using SenseInventory = std::map<std::string, SenseList>;

// Merged (or side-tagged) raw context counts of each occurrence by source id.
std::map<std::string, SparseVector> context_vectors(const OccurrenceSet& occs,
                                                    bool side_tagged = false);

// Sums the full context vectors of each cluster's members into a raw-count
// prototype; prior = cluster size / cs.total_mass.
SenseList build_prototypes(const ClusterSet& cs,
                           const std::map<std::string, SparseVector>& full_occurrences);

// "word#i" row labels.
std::string sense_label(const std::string& word, std::size_t index);
std::pair<std::string, std::size_t> parse_sense_label(const std::string& label);

// Cluster file: "#log_joint<TAB>target<TAB>value" headers, then
// target \t cluster_index \t source_id lines.
void write_cluster_sets(std::ostream& out, const std::vector<ClusterSet>& sets);
// Source ids are resolved against the occurrence sets so indices line up.
std::vector<ClusterSet> read_cluster_sets(std::istream& in,
                                          const std::map<std::string, OccurrenceSet>& occs);

// Inventory rows go through the sparse matrix format; priors sit in a sidecar
// file of "word#i \t prior" lines.
void write_inventory(std::ostream& matrix_out, std::ostream& priors_out, const SenseInventory& inv);
SenseInventory read_inventory(std::istream& matrix_in, std::istream& priors_in);

}  // namespace lexent
