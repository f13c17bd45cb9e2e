#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "lexent/common.hpp"
#include "lexent/senses.hpp"

namespace lexent {

void TieredConfig::validate() const {
  if (!(alpha > 0.0 && beta > 0.0 && eta > 0.0)) {
    throw Error("tiered config: alpha, beta and eta must be positive");
  }
  if (iterations == 0) throw Error("tiered config: iterations must be positive");
  if (eta_role == EtaRole::RootTopic && !(switch_prior > 0.0)) {
    throw Error("tiered config: switch_prior must be positive");
  }
}

namespace {

constexpr int kRoot = 0;
constexpr int kCluster = 1;

// Collapsed state of the depth-2 model. Per-occurrence switch proportions and
// all topics are integrated out; only counts are kept.
class TieredState {
 public:
  TieredState(const OccurrenceSet& occs, const TieredConfig& cfg) {
    cfg.validate();
    alpha_ = cfg.alpha;
    cluster_smoothing_ = cfg.beta;
    if (cfg.eta_role == EtaRole::LevelPrior) {
      level_prior_ = cfg.eta;
      root_smoothing_ = cfg.beta;
    } else {
      level_prior_ = cfg.switch_prior;
      root_smoothing_ = cfg.eta;
    }

    std::set<std::string> vocab;
    for (const auto& o : occs.occurrences) {
      for (const auto& t : o.context()) vocab.insert(t);
    }
    if (vocab.empty()) throw Error("tiered_cluster: no tokens to cluster for '" + occs.target + "'");
    std::map<std::string, std::uint32_t> id;
    for (const auto& w : vocab) id.emplace(w, static_cast<std::uint32_t>(id.size()));
    vocab_size_ = vocab.size();
    for (const auto& o : occs.occurrences) {
      std::vector<std::uint32_t> toks;
      for (const auto& t : o.context()) toks.push_back(id.at(t));
      tokens_.push_back(std::move(toks));
    }
    root_counts_.assign(vocab_size_, 0);
  }

  std::size_t occurrences() const { return tokens_.size(); }
  const std::vector<int>& cluster_of() const { return cluster_of_; }
  const std::vector<std::vector<char>>& at_root() const { return at_root_; }

  // Installs an explicit state; cluster ids must be non-negative.
  void assign(const std::vector<int>& cluster_of, const std::vector<std::vector<bool>>& root) {
    if (cluster_of.size() != tokens_.size() || root.size() != tokens_.size()) {
      throw Error("tiered state: size mismatch");
    }
    cluster_of_.assign(tokens_.size(), -1);
    at_root_.resize(tokens_.size());
    level_counts_.assign(tokens_.size(), {0, 0});
    for (std::size_t o = 0; o < tokens_.size(); ++o) {
      if (root[o].size() != tokens_[o].size()) throw Error("tiered state: token count mismatch");
      at_root_[o].assign(root[o].begin(), root[o].end());
      for (std::size_t j = 0; j < tokens_[o].size(); ++j) {
        if (at_root_[o][j]) add_root(o, j);
      }
    }
    for (std::size_t o = 0; o < tokens_.size(); ++o) {
      const int c = cluster_of[o];
      if (c < 0) throw Error("tiered state: negative cluster id");
      if (static_cast<std::size_t>(c) >= clusters_.size()) clusters_.resize(c + 1, empty_cluster());
      join(o, c);
    }
  }

  void initialise(Rng& rng) {
    const std::size_t n = tokens_.size();
    cluster_of_.assign(n, -1);
    at_root_.resize(n);
    level_counts_.assign(n, {0, 0});
    for (std::size_t o = 0; o < n; ++o) {
      at_root_[o].resize(tokens_[o].size());
      for (std::size_t j = 0; j < tokens_[o].size(); ++j) {
        at_root_[o][j] = rng.uniform() < 0.5;
        if (at_root_[o][j]) add_root(o, j);
      }
    }
    for (std::size_t o = 0; o < n; ++o) join(o, draw_cluster(o, rng));
  }

  void sweep(Rng& rng) {
    for (std::size_t o = 0; o < tokens_.size(); ++o) {
      leave(o);
      join(o, draw_cluster(o, rng));
      resample_levels(o, rng);
    }
  }

  double log_joint() const {
    const double n = static_cast<double>(tokens_.size());
    double lp = std::lgamma(alpha_) - std::lgamma(alpha_ + n);
    for (const auto& c : clusters_) {
      if (c.occupancy == 0) continue;
      lp += std::log(alpha_) + std::lgamma(static_cast<double>(c.occupancy));
      lp += dirichlet_multinomial(c.counts, c.total, cluster_smoothing_);
    }
    lp += dirichlet_multinomial(root_counts_, root_total_, root_smoothing_);
    const double level_norm = std::lgamma(2.0 * level_prior_) - 2.0 * std::lgamma(level_prior_);
    for (const auto& lc : level_counts_) {
      lp += level_norm + std::lgamma(lc[kRoot] + level_prior_) +
            std::lgamma(lc[kCluster] + level_prior_) -
            std::lgamma(lc[kRoot] + lc[kCluster] + 2.0 * level_prior_);
    }
    return lp;
  }

 private:
  struct Cluster {
    int occupancy = 0;
    std::vector<int> counts;
    int total = 0;
  };

  Cluster empty_cluster() const { return Cluster{0, std::vector<int>(vocab_size_, 0), 0}; }

  double dirichlet_multinomial(const std::vector<int>& counts, int total, double smoothing) const {
    const double vb = smoothing * static_cast<double>(vocab_size_);
    double lp = std::lgamma(vb) - std::lgamma(total + vb);
    const double base = std::lgamma(smoothing);
    for (int c : counts) {
      if (c > 0) lp += std::lgamma(c + smoothing) - base;
    }
    return lp;
  }

  void add_root(std::size_t o, std::size_t j) {
    ++root_counts_[tokens_[o][j]];
    ++root_total_;
    ++level_counts_[o][kRoot];
  }

  void remove_root(std::size_t o, std::size_t j) {
    --root_counts_[tokens_[o][j]];
    --root_total_;
    --level_counts_[o][kRoot];
  }

  void join(std::size_t o, int c) {
    cluster_of_[o] = c;
    Cluster& cl = clusters_[c];
    ++cl.occupancy;
    for (std::size_t j = 0; j < tokens_[o].size(); ++j) {
      if (at_root_[o][j]) continue;
      ++cl.counts[tokens_[o][j]];
      ++cl.total;
      ++level_counts_[o][kCluster];
    }
  }

  void leave(std::size_t o) {
    Cluster& cl = clusters_[cluster_of_[o]];
    --cl.occupancy;
    for (std::size_t j = 0; j < tokens_[o].size(); ++j) {
      if (at_root_[o][j]) continue;
      --cl.counts[tokens_[o][j]];
      --cl.total;
      --level_counts_[o][kCluster];
    }
    cluster_of_[o] = -1;
  }

  // CRP prior times the predictive probability of the occurrence's
  // cluster-level tokens, for every live cluster and one new cluster.
  int draw_cluster(std::size_t o, Rng& rng) {
    std::map<std::uint32_t, int> own;
    int own_total = 0;
    for (std::size_t j = 0; j < tokens_[o].size(); ++j) {
      if (!at_root_[o][j]) {
        ++own[tokens_[o][j]];
        ++own_total;
      }
    }
    const double vb = cluster_smoothing_ * static_cast<double>(vocab_size_);
    auto predictive = [&](const Cluster* cl) {
      const double total = cl ? cl->total : 0;
      double lp = std::lgamma(total + vb) - std::lgamma(total + own_total + vb);
      for (const auto& [w, k] : own) {
        const double have = cl ? cl->counts[w] : 0;
        lp += std::lgamma(have + k + cluster_smoothing_) - std::lgamma(have + cluster_smoothing_);
      }
      return lp;
    };

    candidates_.clear();
    weights_.clear();
    int free_slot = -1;
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      if (clusters_[c].occupancy == 0) {
        if (free_slot < 0) free_slot = static_cast<int>(c);
        continue;
      }
      candidates_.push_back(static_cast<int>(c));
      weights_.push_back(std::log(static_cast<double>(clusters_[c].occupancy)) +
                         predictive(&clusters_[c]));
    }
    candidates_.push_back(-1);
    weights_.push_back(std::log(alpha_) + predictive(nullptr));

    int chosen = candidates_[rng.categorical_log(weights_)];
    if (chosen < 0) {
      if (free_slot < 0) {
        free_slot = static_cast<int>(clusters_.size());
        clusters_.push_back(empty_cluster());
      }
      chosen = free_slot;
    }
    return chosen;
  }

  void resample_levels(std::size_t o, Rng& rng) {
    Cluster& cl = clusters_[cluster_of_[o]];
    const double root_vb = root_smoothing_ * static_cast<double>(vocab_size_);
    const double cluster_vb = cluster_smoothing_ * static_cast<double>(vocab_size_);
    for (std::size_t j = 0; j < tokens_[o].size(); ++j) {
      const std::uint32_t w = tokens_[o][j];
      if (at_root_[o][j]) {
        remove_root(o, j);
      } else {
        --cl.counts[w];
        --cl.total;
        --level_counts_[o][kCluster];
      }
      const double p_root = (level_counts_[o][kRoot] + level_prior_) *
                            (root_counts_[w] + root_smoothing_) / (root_total_ + root_vb);
      const double p_cluster = (level_counts_[o][kCluster] + level_prior_) *
                               (cl.counts[w] + cluster_smoothing_) / (cl.total + cluster_vb);
      at_root_[o][j] = rng.uniform() * (p_root + p_cluster) < p_root;
      if (at_root_[o][j]) {
        add_root(o, j);
      } else {
        ++cl.counts[w];
        ++cl.total;
        ++level_counts_[o][kCluster];
      }
    }
  }

  double alpha_ = 1.0;
  double cluster_smoothing_ = 0.1;
  double root_smoothing_ = 0.1;
  double level_prior_ = 0.01;
  std::size_t vocab_size_ = 0;

  std::vector<std::vector<std::uint32_t>> tokens_;
  std::vector<int> cluster_of_;
  std::vector<std::vector<char>> at_root_;
  std::vector<std::array<int, 2>> level_counts_;
  std::vector<int> root_counts_;
  int root_total_ = 0;
  std::vector<Cluster> clusters_;

  std::vector<int> candidates_;
  std::vector<double> weights_;
};

}  // namespace

double tiered_log_joint(const OccurrenceSet& occs, const TieredConfig& cfg,
                        const std::vector<int>& cluster_of,
                        const std::vector<std::vector<bool>>& root_tokens) {
  TieredState state(occs, cfg);
  state.assign(cluster_of, root_tokens);
  return state.log_joint();
}

ClusterSet tiered_cluster(const OccurrenceSet& occs, const TieredConfig& cfg) {
  TieredState state(occs, cfg);
  Rng rng(cfg.seed);
  state.initialise(rng);

  ClusterSet out;
  out.target = occs.target;
  for (const auto& o : occs.occurrences) out.source_ids.push_back(o.source_id);

  double best = state.log_joint();
  out.log_joint_trace.push_back(best);
  std::vector<int> best_clusters = state.cluster_of();
  std::vector<std::vector<char>> best_root = state.at_root();
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    state.sweep(rng);
    const double lp = state.log_joint();
    out.log_joint_trace.push_back(lp);
    if (lp > best) {
      best = lp;
      best_clusters = state.cluster_of();
      best_root = state.at_root();
    }
  }

  // Relabel clusters in order of first member so output does not depend on
  // slot reuse.
  std::map<int, std::size_t> canonical;
  for (int c : best_clusters) {
    if (!canonical.count(c)) canonical.emplace(c, canonical.size());
  }
  out.clusters.assign(canonical.size(), {});
  for (std::size_t o = 0; o < best_clusters.size(); ++o) {
    out.clusters[canonical.at(best_clusters[o])].push_back(o);
  }
  out.total_mass = static_cast<double>(best_clusters.size());

  std::vector<std::vector<bool>> root(best_root.size());
  for (std::size_t o = 0; o < best_root.size(); ++o) root[o].assign(best_root[o].begin(), best_root[o].end());
  out.root_tokens = std::move(root);
  out.log_joint = best;
  return out;
}

}  // namespace lexent
