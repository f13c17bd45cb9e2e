#include "lexent/senses.hpp"

#include <algorithm>
#include <istream>
#include <memory>
#include <ostream>
#include <set>

#include "lexent/common.hpp"

namespace lexent {

void CorrelationConfig::validate() const {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw Error("correlation config: sigma must lie in [0,1]");
  if (!(min_cluster_frac > 0.0 && min_cluster_frac < 1.0)) {
    throw Error("correlation config: min_cluster_frac must lie in (0,1)");
  }
  if (stall_window == 0) throw Error("correlation config: stall_window must be positive");
}

std::vector<int> ClusterSet::labels() const {
  std::vector<int> out(source_ids.size(), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t i : clusters[c]) {
      if (out.at(i) != -1) throw Error("ClusterSet::labels: occurrence in two clusters");
      out[i] = static_cast<int>(c);
    }
  }
  return out;
}

BagSimilarity make_llm_similarity(const OccurrenceSet& occs, const Taxonomy& taxonomy) {
  std::set<std::string> vocab;
  for (const auto& o : occs.occurrences) {
    for (const auto& t : o.context()) vocab.insert(t);
  }
  auto table = std::make_shared<SimilarityTable>(build_similarity_table(
      std::vector<std::string>(vocab.begin(), vocab.end()), wu_palmer_metric(taxonomy)));
  return [table](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    auto ids = [&](const std::vector<std::string>& bag) {
      std::vector<std::uint32_t> out;
      out.reserve(bag.size());
      for (const auto& w : bag) {
        const std::size_t i = table->index(w);
        if (i == table->size()) throw Error("llm similarity: token '" + w + "' outside the table");
        out.push_back(static_cast<std::uint32_t>(i));
      }
      return out;
    };
    const auto ia = ids(a);
    const auto ib = ids(b);
    return llm_similarity(std::span<const std::uint32_t>(ia), std::span<const std::uint32_t>(ib),
                          *table);
  };
}

namespace {

ClusterSet correlation_impl(const OccurrenceSet& occs, const CorrelationConfig& cfg,
                            const BagSimilarity& sim, bool parallel) {
  cfg.validate();
  const std::size_t n = occs.occurrences.size();
  if (n == 0) throw Error("correlation_cluster: no occurrences for '" + occs.target + "'");

  std::vector<std::vector<std::string>> bags;
  bags.reserve(n);
  ClusterSet out;
  out.target = occs.target;
  for (const auto& o : occs.occurrences) {
    bags.push_back(o.context());
    out.source_ids.push_back(o.source_id);
  }

  const double big_size = cfg.min_cluster_frac * static_cast<double>(n);
  std::vector<char> assigned(n, 0);
  std::size_t remaining = n;
  std::size_t cursor = 0;
  std::size_t big = 0;
  Rng rng(cfg.seed);
  std::vector<double> row(n);

  while (remaining > 0) {
    std::size_t pivot;
    if (cfg.random_pivot) {
      std::size_t pick = rng.below(remaining);
      pivot = 0;
      for (;; ++pivot) {
        if (!assigned[pivot] && pick-- == 0) break;
      }
    } else {
      while (assigned[cursor]) ++cursor;
      pivot = cursor;
    }

    const long count = static_cast<long>(n);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
      for (long j = 0; j < count; ++j) {
        row[j] = static_cast<std::size_t>(j) == pivot ? 0.0 : sim(bags[pivot], bags[j]);
      }
    } else {
      for (long j = 0; j < count; ++j) {
        row[j] = static_cast<std::size_t>(j) == pivot ? 0.0 : sim(bags[pivot], bags[j]);
      }
    }

    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == pivot || row[j] > cfg.sigma) {
        members.push_back(j);
        if (!assigned[j]) {
          assigned[j] = 1;
          --remaining;
        }
      }
    }
    if (static_cast<double>(members.size()) >= big_size) ++big;
    out.clusters.push_back(std::move(members));

    if (big >= cfg.min_big_clusters && out.clusters.size() >= cfg.stall_window) {
      bool stalled = true;
      for (std::size_t k = out.clusters.size() - cfg.stall_window; k < out.clusters.size(); ++k) {
        if (static_cast<double>(out.clusters[k].size()) >= big_size) stalled = false;
      }
      if (stalled) break;
    }
  }

  for (const auto& c : out.clusters) out.total_mass += static_cast<double>(c.size());
  return out;
}

}  // namespace

ClusterSet correlation_cluster(const OccurrenceSet& occs, const CorrelationConfig& cfg,
                               const BagSimilarity& sim) {
  return correlation_impl(occs, cfg, sim, true);
}

ClusterSet correlation_cluster_serial(const OccurrenceSet& occs, const CorrelationConfig& cfg,
                                      const BagSimilarity& sim) {
  return correlation_impl(occs, cfg, sim, false);
}

ClusterSet filter_clusters(const ClusterSet& cs, double min_frac) {
  if (!(min_frac > 0.0 && min_frac < 1.0)) throw Error("filter_clusters: min_frac must lie in (0,1)");
  const double threshold = min_frac * static_cast<double>(cs.occurrence_count());
  ClusterSet out = cs;
  out.clusters.clear();
  for (const auto& c : cs.clusters) {
    if (static_cast<double>(c.size()) >= threshold) out.clusters.push_back(c);
  }
  if (out.clusters.empty()) {
    std::vector<std::size_t> all(cs.occurrence_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    out.clusters.push_back(std::move(all));
    out.total_mass = static_cast<double>(cs.occurrence_count());
  }
  return out;
}

ClusterSet single_cluster(const OccurrenceSet& occs) {
  ClusterSet out;
  out.target = occs.target;
  std::vector<std::size_t> all;
  for (std::size_t i = 0; i < occs.occurrences.size(); ++i) {
    out.source_ids.push_back(occs.occurrences[i].source_id);
    all.push_back(i);
  }
  out.total_mass = static_cast<double>(all.size());
  out.clusters.push_back(std::move(all));
  return out;
}

std::map<std::string, SparseVector> context_vectors(const OccurrenceSet& occs, bool side_tagged) {
  std::map<std::string, SparseVector> out;
  for (const auto& o : occs.occurrences) {
    SparseVector v;
    for (const auto& t : o.left) v.add(side_tagged ? side_feature(Side::Left, t) : t, 1.0);
    for (const auto& t : o.right) v.add(side_tagged ? side_feature(Side::Right, t) : t, 1.0);
    out[o.source_id] = std::move(v);
  }
  return out;
}

SenseList build_prototypes(const ClusterSet& cs,
                           const std::map<std::string, SparseVector>& full_occurrences) {
  if (cs.clusters.empty()) throw Error("build_prototypes: no clusters for '" + cs.target + "'");
  if (!(cs.total_mass > 0.0)) throw Error("build_prototypes: zero total mass for '" + cs.target + "'");
  SenseList senses;
  for (const auto& cluster : cs.clusters) {
    Sense s;
    for (std::size_t i : cluster) {
      const std::string& id = cs.source_ids.at(i);
      auto it = full_occurrences.find(id);
      if (it == full_occurrences.end()) {
        throw Error("build_prototypes: no original context for occurrence '" + id + "' of '" +
                    cs.target + "'");
      }
      for (const auto& [f, w] : it->second) s.prototype.add(f, w);
    }
    s.prior = static_cast<double>(cluster.size()) / cs.total_mass;
    senses.push_back(std::move(s));
  }
  return senses;
}

std::string sense_label(const std::string& word, std::size_t index) {
  return word + "#" + std::to_string(index);
}

std::pair<std::string, std::size_t> parse_sense_label(const std::string& label) {
  const auto pos = label.rfind('#');
  if (pos == std::string::npos || pos == 0) throw Error("bad sense label '" + label + "'");
  return {label.substr(0, pos),
          static_cast<std::size_t>(parse_int(std::string_view(label).substr(pos + 1), "sense index"))};
}

void write_cluster_sets(std::ostream& out, const std::vector<ClusterSet>& sets) {
  for (const auto& cs : sets) {
    out << "#log_joint\t" << cs.target << '\t'
        << (cs.log_joint ? format_double(*cs.log_joint) : std::string("none")) << '\n';
    for (std::size_t c = 0; c < cs.clusters.size(); ++c) {
      for (std::size_t i : cs.clusters[c]) {
        out << cs.target << '\t' << c << '\t' << cs.source_ids.at(i) << '\n';
      }
    }
  }
}

std::vector<ClusterSet> read_cluster_sets(std::istream& in,
                                          const std::map<std::string, OccurrenceSet>& occs) {
  std::map<std::string, ClusterSet> sets;
  std::map<std::string, std::map<std::string, std::size_t>> index;
  auto get = [&](const std::string& target) -> ClusterSet& {
    auto it = sets.find(target);
    if (it != sets.end()) return it->second;
    auto o = occs.find(target);
    if (o == occs.end()) throw Error("cluster file: no occurrences for target '" + target + "'");
    ClusterSet cs;
    cs.target = target;
    auto& idx = index[target];
    for (std::size_t i = 0; i < o->second.occurrences.size(); ++i) {
      cs.source_ids.push_back(o->second.occurrences[i].source_id);
      idx.emplace(cs.source_ids.back(), i);
    }
    return sets.emplace(target, std::move(cs)).first->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    const std::string where = "cluster file line " + std::to_string(line_no);
    if (fields[0] == "#log_joint") {
      if (fields.size() != 3) throw Error(where + ": malformed header");
      auto& cs = get(fields[1]);
      if (fields[2] != "none") cs.log_joint = parse_double(fields[2], where);
      continue;
    }
    if (fields.size() != 3) throw Error(where + ": expected 3 fields");
    auto& cs = get(fields[0]);
    const auto c = static_cast<std::size_t>(parse_int(fields[1], where));
    auto it = index[fields[0]].find(fields[2]);
    if (it == index[fields[0]].end()) throw Error(where + ": unknown source id '" + fields[2] + "'");
    if (cs.clusters.size() <= c) cs.clusters.resize(c + 1);
    cs.clusters[c].push_back(it->second);
  }

  std::vector<ClusterSet> out;
  for (auto& [target, cs] : sets) {
    for (auto& c : cs.clusters) std::sort(c.begin(), c.end());
    std::erase_if(cs.clusters, [](const auto& c) { return c.empty(); });
    for (const auto& c : cs.clusters) cs.total_mass += static_cast<double>(c.size());
    out.push_back(std::move(cs));
  }
  return out;
}

void write_inventory(std::ostream& matrix_out, std::ostream& priors_out, const SenseInventory& inv) {
  std::map<std::string, SparseVector> rows;
  std::vector<std::pair<std::string, double>> priors;
  for (const auto& [word, senses] : inv) {
    for (std::size_t i = 0; i < senses.size(); ++i) {
      rows[sense_label(word, i)] = senses[i].prototype;
      priors.emplace_back(sense_label(word, i), senses[i].prior);
    }
  }
  SparseMatrix m;
  std::set<std::string> cols;
  for (auto& [label, row] : rows) {
    for (const auto& [f, w] : row) cols.insert(f);
    m.labels.push_back(label);
    m.rows.push_back(row);
  }
  m.columns.assign(cols.begin(), cols.end());
  write_sparse_matrix(matrix_out, m);
  for (const auto& [label, prior] : priors) priors_out << label << '\t' << format_double(prior) << '\n';
}

SenseInventory read_inventory(std::istream& matrix_in, std::istream& priors_in) {
  const SparseMatrix m = read_sparse_matrix(matrix_in);
  std::map<std::string, double> priors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(priors_in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2) throw Error("priors line " + std::to_string(line_no) + ": expected 2 fields");
    priors[fields[0]] = parse_double(fields[1], "prior");
  }
  std::map<std::string, std::map<std::size_t, Sense>> grouped;
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    auto [word, index] = parse_sense_label(m.labels[i]);
    auto p = priors.find(m.labels[i]);
    if (p == priors.end()) throw Error("priors file: no prior for '" + m.labels[i] + "'");
    grouped[word][index] = Sense{m.rows[i], p->second};
  }
  SenseInventory inv;
  for (auto& [word, senses] : grouped) {
    for (auto& [index, s] : senses) inv[word].push_back(std::move(s));
  }
  return inv;
}

}  // namespace lexent
