#include "lexent/convecs.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lexent/common.hpp"

namespace lexent {

std::string to_string(TrainPairStrategy s) {
  return s == TrainPairStrategy::BestOverlap ? "BestOverlap" : "AvgVector";
}

std::string to_string(EvalStrategy s) {
  switch (s) {
    case EvalStrategy::AvgScore: return "AvgScore";
    case EvalStrategy::MaxScore: return "MaxScore";
    case EvalStrategy::AvgVector: return "AvgVector";
  }
  return "";
}

TrainPairStrategy parse_train_pair_strategy(const std::string& name) {
  if (name == "BestOverlap" || name == "best") return TrainPairStrategy::BestOverlap;
  if (name == "AvgVector" || name == "avgvec") return TrainPairStrategy::AvgVector;
  throw Error("unknown training pair strategy: " + name);
}

EvalStrategy parse_eval_strategy(const std::string& name) {
  if (name == "AvgScore" || name == "avg") return EvalStrategy::AvgScore;
  if (name == "MaxScore" || name == "max") return EvalStrategy::MaxScore;
  if (name == "AvgVector" || name == "avgvec") return EvalStrategy::AvgVector;
  throw Error("unknown ConVecs strategy: " + name);
}

Dense average_latent(const LatentSenseList& senses) {
  if (senses.empty()) throw Error("empty sense list");
  if (senses.size() == 1) return senses[0].latent;
  const std::size_t k = senses[0].latent.size();
  Dense out(k, 0.0);
  double mass = 0.0;
  for (const LatentSense& s : senses) {
    if (s.latent.size() != k) throw Error("average_latent: sense dimensions differ");
    if (!(s.prior > 0.0)) throw Error("average_latent: sense prior must be positive");
    for (std::size_t d = 0; d < k; ++d) out[d] += s.prior * s.latent[d];
    mass += s.prior;
  }
  for (double& x : out) x /= mass;
  return out;
}

PairExample select_training_pair(bool entails, const LatentSenseList& senses_u,
                                 const LatentSenseList& senses_v, const TrainPairOptions& options) {
  if (senses_u.empty() || senses_v.empty()) throw Error("select_training_pair: empty sense list");
  if (options.strategy == TrainPairStrategy::AvgVector) {
    return PairExample{average_latent(senses_u), average_latent(senses_v), entails};
  }
  const bool least = options.least_overlap_negatives && !entails;
  std::size_t bi = 0, bj = 0;
  double best = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < senses_u.size(); ++i) {
    for (std::size_t j = 0; j < senses_v.size(); ++j) {
      if (!senses_u[i].profile || !senses_v[j].profile) {
        throw Error("select_training_pair: BestOverlap needs sparse sense profiles");
      }
      const double s = balapinc(*senses_u[i].profile, *senses_v[j].profile);
      if (first || (least ? s < best : s > best)) {
        best = s;
        bi = i;
        bj = j;
        first = false;
      }
    }
  }
  return PairExample{senses_u[bi].latent, senses_v[bj].latent, entails};
}

namespace {

Dense concat_normalized(const Dense& u, const Dense& v) {
  Dense x(u);
  x.insert(x.end(), v.begin(), v.end());
  return normalized(x);
}

}  // namespace

double ConvecsModel::decision(const Dense& u, const Dense& v) const {
  if (u.size() != latent_dim || v.size() != latent_dim) {
    throw Error("score_pair: dimension mismatch (model " + std::to_string(latent_dim) + ", got " +
                std::to_string(u.size()) + " and " + std::to_string(v.size()) + ")");
  }
  return svm.decision(concat_normalized(u, v));
}

ConvecsModel train_convecs(const std::vector<PairExample>& examples, int kernel_degree,
                           double regularization, std::uint64_t seed,
                           std::size_t calibration_folds) {
  if (examples.empty()) throw Error("degenerate training set");
  const std::size_t k = examples[0].u_latent.size();
  std::vector<Dense> xs;
  std::vector<int> ys;
  xs.reserve(examples.size());
  for (const PairExample& e : examples) {
    if (e.u_latent.size() != k || e.v_latent.size() != k) {
      throw Error("train_convecs: examples differ in latent dimension");
    }
    xs.push_back(concat_normalized(e.u_latent, e.v_latent));
    ys.push_back(e.entails ? 1 : -1);
  }
  const bool pos = std::count(ys.begin(), ys.end(), 1) > 0;
  const bool neg = std::count(ys.begin(), ys.end(), -1) > 0;
  if (!pos || !neg) throw Error("degenerate training set");

  SvmOptions options;
  options.c = regularization;
  ConvecsModel model;
  model.latent_dim = k;
  model.svm = train_svm(xs, ys, kernel_degree, options);
  const std::vector<double> dec =
      out_of_fold_decisions(xs, ys, kernel_degree, options, calibration_folds, mix_seed(seed, 0xca11));
  model.calibration = fit_platt(dec, ys);
  return model;
}

double score_pair(const ConvecsModel& m, const Dense& u_latent, const Dense& v_latent) {
  return m.calibration.probability(m.decision(u_latent, v_latent));
}

double eval_pair(const ConvecsModel& m, const LatentSenseList& senses_u,
                 const LatentSenseList& senses_v, EvalStrategy strategy) {
  if (senses_u.empty() || senses_v.empty()) throw Error("eval_pair: empty sense list");
  if (strategy == EvalStrategy::AvgVector) {
    return score_pair(m, average_latent(senses_u), average_latent(senses_v));
  }
  const std::vector<double> pu(senses_u.size(), 1.0), pv(senses_v.size(), 1.0);
  return combine_scores(pu, pv,
                        strategy == EvalStrategy::MaxScore ? CombinationStrategy::MaxScore
                                                           : CombinationStrategy::AvgScore,
                        [&](std::size_t i, std::size_t j) {
                          return score_pair(m, senses_u[i].latent, senses_v[j].latent);
                        });
}

std::string latent_fingerprint(const LatentMatrix& m) {
  std::string buf;
  for (const std::string& c : m.columns) {
    buf += c;
    buf += '\n';
  }
  for (double s : m.singular_values) buf += format_double(s) + ' ';
  for (double b : m.basis) buf += format_double(b) + ' ';
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(stable_hash(buf)));
  return std::string("svd:") + hex;
}

void write_model(std::ostream& out, const ConvecsModel& m) {
  out << "convecs-model 1\n";
  out << "latent_dim " << m.latent_dim << '\n';
  out << "kernel poly " << m.svm.degree << '\n';
  out << "rho " << format_double(m.svm.rho) << '\n';
  out << "platt " << format_double(m.calibration.a) << ' ' << format_double(m.calibration.b) << '\n';
  out << "projection " << (m.projection.empty() ? "-" : m.projection) << '\n';
  out << "support " << m.svm.support.size() << '\n';
  for (std::size_t i = 0; i < m.svm.support.size(); ++i) {
    out << format_double(m.svm.coef[i]) << '\t';
    for (std::size_t d = 0; d < m.svm.support[i].size(); ++d) {
      if (d) out << ' ';
      out << format_double(m.svm.support[i][d]);
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string> expect_line(std::istream& in, const std::string& key, std::size_t fields,
                                     std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw Error("model file: missing '" + key + "' line");
  ++line_no;
  std::vector<std::string> parts;
  std::istringstream ss(line);
  for (std::string p; ss >> p;) parts.push_back(p);
  if (parts.size() != fields + 1 || parts[0] != key) {
    throw Error("model file line " + std::to_string(line_no) + ": expected '" + key + "'");
  }
  return parts;
}

}  // namespace

ConvecsModel read_model(std::istream& in) {
  std::size_t line_no = 0;
  const auto header = expect_line(in, "convecs-model", 1, line_no);
  if (header[1] != "1") throw Error("model file: unsupported version " + header[1]);
  ConvecsModel m;
  m.latent_dim = static_cast<std::size_t>(parse_int(expect_line(in, "latent_dim", 1, line_no)[1], "latent_dim"));
  const auto kernel = expect_line(in, "kernel", 2, line_no);
  if (kernel[1] != "poly") throw Error("model file: unsupported kernel " + kernel[1]);
  m.svm.degree = static_cast<int>(parse_int(kernel[2], "kernel degree"));
  m.svm.rho = parse_double(expect_line(in, "rho", 1, line_no)[1], "rho");
  const auto platt = expect_line(in, "platt", 2, line_no);
  m.calibration.a = parse_double(platt[1], "platt a");
  m.calibration.b = parse_double(platt[2], "platt b");
  const std::string projection = expect_line(in, "projection", 1, line_no)[1];
  m.projection = projection == "-" ? "" : projection;
  const auto n = static_cast<std::size_t>(parse_int(expect_line(in, "support", 1, line_no)[1], "support"));
  for (std::size_t i = 0; i < n; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw Error("model file: truncated support vectors");
    ++line_no;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("model file line " + std::to_string(line_no) + ": malformed support vector");
    }
    m.svm.coef.push_back(parse_double(line.substr(0, tab), "support coefficient"));
    Dense x;
    std::istringstream ss(line.substr(tab + 1));
    for (std::string v; ss >> v;) x.push_back(parse_double(v, "support vector value"));
    if (x.size() != 2 * m.latent_dim) {
      throw Error("model file line " + std::to_string(line_no) + ": support vector has wrong length");
    }
    m.svm.support.push_back(std::move(x));
  }
  return m;
}

}  // namespace lexent
