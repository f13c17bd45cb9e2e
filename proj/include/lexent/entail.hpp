#pragma once

// balAPinc: average-precision-style inclusion (APinc) of u's ranked features
// in v's, balanced by Lin's symmetric similarity. Plus the strategies that
// fold a sense-by-sense score matrix into one pair score.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lexent/senses.hpp"
#include "lexent/vsm.hpp"

namespace lexent {

inline constexpr std::size_t kDefaultFeatureListCap = 1000;

// 1 - rank(f, Fw) / (|Fw| + 1) if f is in Fw, else 0.
double rel_score(const std::string& feature, const RankedFeatureList& fw);

// (1/|Fu|) * sum over ranks r of P(r) * rel(f_ur, Fv), P(r) being the share of
// Fu's top r features that also appear in Fv. Zero for an empty Fu. The sum is
// accumulated as an exact fraction while it fits in 128 bits, so the result
// is the correctly rounded value for the list sizes seen in practice.
double apinc(const RankedFeatureList& fu, const RankedFeatureList& fv);

// Lin's weighted overlap: shared mass of both vectors over their total mass.
double lin_similarity(const SparseVector& u, const SparseVector& v);

struct EntailmentScore {
  double value = 0.0;
  std::string narrower;  // u
  std::string broader;   // v
};

double balapinc(const SparseVector& u, const SparseVector& v,
                std::size_t cap = kDefaultFeatureListCap);

// A vector with its ranked list computed once, for repeated scoring.
struct PreparedVector {
  SparseVector vector;
  RankedFeatureList ranked;
  double prior = 1.0;
};

PreparedVector prepare(const SparseVector& v, double prior, std::size_t cap);
double balapinc(const PreparedVector& u, const PreparedVector& v);

enum class CombinationStrategy { AvgScore, MaxScore, WeightedAvgScore, WeightedMaxScore };

std::string to_string(CombinationStrategy s);
CombinationStrategy parse_combination_strategy(const std::string& name);

using PairScorer = std::function<double(std::size_t i, std::size_t j)>;

// Folds base(i, j) over every sense pair:
//   AvgScore         mean
//   MaxScore         max
//   WeightedAvgScore sum p_i q_j S_ij / sum p_i q_j
//   WeightedMaxScore max p_i q_j S_ij / max p_i q_j
// A 1x1 matrix returns base(0, 0) untouched.
double combine_scores(const std::vector<double>& priors_u, const std::vector<double>& priors_v,
                      CombinationStrategy strategy, const PairScorer& base);

using VectorScorer = std::function<double(const SparseVector&, const SparseVector&)>;

EntailmentScore combine_sense_scores(const SenseList& senses_u, const SenseList& senses_v,
                                     CombinationStrategy strategy, const VectorScorer& base);

// Batch balAPinc over word pairs of a weighted inventory. Words are prepared
// once; pairs are scored in parallel.
class BalapincScorer {
 public:
  BalapincScorer(const SenseInventory& weighted, std::size_t cap = kDefaultFeatureListCap);

  bool has_word(const std::string& w) const { return prepared_.count(w) > 0; }
  double score(const std::string& u, const std::string& v, CombinationStrategy s) const;
  std::vector<double> score_all(const std::vector<std::pair<std::string, std::string>>& pairs,
                                CombinationStrategy s) const;
  std::vector<double> score_all_serial(const std::vector<std::pair<std::string, std::string>>& pairs,
                                       CombinationStrategy s) const;

 private:
  std::map<std::string, std::vector<PreparedVector>> prepared_;
};

// Score dump: word1 \t word2 \t strategy \t score.
struct ScoreLine {
  std::string u, v, strategy;
  double score = 0.0;
};
void write_score_dump(std::ostream& out, const std::vector<ScoreLine>& lines);

}  // namespace lexent
