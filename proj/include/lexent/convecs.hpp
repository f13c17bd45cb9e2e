#pragma once

// ConVecs: a probabilistic quadratic-kernel SVM over the concatenation
// (u, v) of two latent word vectors, plus the multi-sense strategies for
// choosing training examples and for scoring.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lexent/entail.hpp"
#include "lexent/svm.hpp"
#include "lexent/vsm.hpp"

namespace lexent {

struct PairExample {
  Dense u_latent;
  Dense v_latent;
  bool entails = false;
};

enum class TrainPairStrategy { BestOverlap, AvgVector };
enum class EvalStrategy { AvgScore, MaxScore, AvgVector };

std::string to_string(TrainPairStrategy s);
std::string to_string(EvalStrategy s);
TrainPairStrategy parse_train_pair_strategy(const std::string& name);
EvalStrategy parse_eval_strategy(const std::string& name);

// One sense of a word as ConVecs sees it. `profile` is the weighted sparse
// prototype, needed only by BestOverlap.
struct LatentSense {
  Dense latent;
  double prior = 1.0;
  const PreparedVector* profile = nullptr;
};
using LatentSenseList = std::vector<LatentSense>;

// Prior-weighted mean of the latent vectors. A single sense is returned as is.
Dense average_latent(const LatentSenseList& senses);

struct TrainPairOptions {
  TrainPairStrategy strategy = TrainPairStrategy::AvgVector;
  // BestOverlap only: negatives take the least-overlapping sense pair
  // instead of the most-overlapping one.
  bool least_overlap_negatives = false;
};

PairExample select_training_pair(bool entails, const LatentSenseList& senses_u,
                                 const LatentSenseList& senses_v, const TrainPairOptions& options);

struct ConvecsConfig {
  int kernel_degree = 2;
  double regularization = 1.0;
  std::size_t calibration_folds = 5;
  TrainPairOptions train_pairs;
  EvalStrategy eval = EvalStrategy::AvgVector;
};

struct ConvecsModel {
  std::size_t latent_dim = 0;
  SvmModel svm;
  PlattSigmoid calibration;
  std::string projection;  // fingerprint of the latent space the model was trained in

  int kernel_degree() const { return svm.degree; }
  double decision(const Dense& u, const Dense& v) const;
};

ConvecsModel train_convecs(const std::vector<PairExample>& examples, int kernel_degree,
                           double regularization, std::uint64_t seed,
                           std::size_t calibration_folds = 5);

// Calibrated probability that u entails v.
double score_pair(const ConvecsModel& m, const Dense& u_latent, const Dense& v_latent);

double eval_pair(const ConvecsModel& m, const LatentSenseList& senses_u,
                 const LatentSenseList& senses_v, EvalStrategy strategy);

// Order-sensitive hash of a latent space's basis, columns and singular values.
std::string latent_fingerprint(const LatentMatrix& m);

// Text container:
//   convecs-model 1
//   latent_dim <k>
//   kernel poly <degree>
//   rho <value>
//   platt <a> <b>
//   projection <fingerprint>
//   support <n>
//   <coef> \t <x1> <x2> ... (n lines, 2k values each)
void write_model(std::ostream& out, const ConvecsModel& m);
ConvecsModel read_model(std::istream& in);

}  // namespace lexent
