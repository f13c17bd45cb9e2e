#include "lexent/entail.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "lexent/common.hpp"

namespace lexent {

double rel_score(const std::string& feature, const RankedFeatureList& fw) {
  const std::size_t r = fw.rank(feature);
  if (r == 0) return 0.0;
  return 1.0 - static_cast<double>(r) / static_cast<double>(fw.size() + 1);
}

namespace {

using i128 = __int128;

constexpr i128 kFractionLimit = static_cast<i128>(1) << 100;
constexpr i128 kExactDouble = static_cast<i128>(1) << 53;

i128 gcd128(i128 a, i128 b) {
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Sum of terms a/r with non-negative integers; gives up (returns false) once
// the reduced fraction would exceed the 128-bit headroom.
class ExactSum {
 public:
  bool add(long long a, long long r) {
    if (a == 0) return true;
    const i128 g = gcd128(den_, r);
    const i128 scale_self = r / g;
    const i128 scale_term = den_ / g;
    if (den_ > kFractionLimit / scale_self) return false;
    num_ = num_ * scale_self + static_cast<i128>(a) * scale_term;
    den_ *= scale_self;
    const i128 h = gcd128(num_, den_);
    num_ /= h;
    den_ /= h;
    return num_ < kFractionLimit;
  }

  // num / (den * extra), correctly rounded when both sides fit in a double.
  bool value(long long extra, double* out) const {
    i128 den = den_ * extra;
    i128 num = num_;
    const i128 h = gcd128(num, den);
    if (h > 1) {
      num /= h;
      den /= h;
    }
    if (num > kExactDouble || den > kExactDouble) return false;
    *out = static_cast<double>(num) / static_cast<double>(den);
    return true;
  }

 private:
  i128 num_ = 0;
  i128 den_ = 1;
};

}  // namespace

double apinc(const RankedFeatureList& fu, const RankedFeatureList& fv) {
  const std::size_t n = fu.size();
  if (n == 0) return 0.0;
  const auto m1 = static_cast<long long>(fv.size() + 1);

  // Each term P(r) * rel(f_ur) = inc_r * (|Fv| + 1 - rank) / (r * (|Fv| + 1)).
  ExactSum exact;
  bool exact_ok = true;
  double approx = 0.0;
  long long included = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    const std::size_t rank_v = fv.rank(fu.at_rank(r).first);
    if (rank_v == 0) continue;
    ++included;
    const long long weight = m1 - static_cast<long long>(rank_v);
    approx += static_cast<double>(included) / static_cast<double>(r) * static_cast<double>(weight);
    if (exact_ok) exact_ok = exact.add(included * weight, static_cast<long long>(r));
  }
  const long long norm = static_cast<long long>(n) * m1;
  double result;
  if (exact_ok && exact.value(norm, &result)) return result;
  return approx / static_cast<double>(norm);
}

double lin_similarity(const SparseVector& u, const SparseVector& v) {
  if (u.empty() || v.empty()) return 0.0;
  double shared = 0.0;
  const auto& small = u.size() <= v.size() ? u : v;
  const auto& big = u.size() <= v.size() ? v : u;
  for (const auto& [f, w] : small) {
    const double other = big.get(f);
    if (other > 0.0) shared += w + other;
  }
  return shared / (u.total() + v.total());
}

double balapinc(const SparseVector& u, const SparseVector& v, std::size_t cap) {
  return balapinc(prepare(u, 1.0, cap), prepare(v, 1.0, cap));
}

PreparedVector prepare(const SparseVector& v, double prior, std::size_t cap) {
  return PreparedVector{v, rank_features(v, cap), prior};
}

double balapinc(const PreparedVector& u, const PreparedVector& v) {
  const double a = apinc(u.ranked, v.ranked);
  if (a == 0.0) return 0.0;
  return std::sqrt(a * lin_similarity(u.vector, v.vector));
}

std::string to_string(CombinationStrategy s) {
  switch (s) {
    case CombinationStrategy::AvgScore: return "AvgScore";
    case CombinationStrategy::MaxScore: return "MaxScore";
    case CombinationStrategy::WeightedAvgScore: return "WeightedAvgScore";
    case CombinationStrategy::WeightedMaxScore: return "WeightedMaxScore";
  }
  return "?";
}

CombinationStrategy parse_combination_strategy(const std::string& name) {
  if (name == "AvgScore" || name == "avg") return CombinationStrategy::AvgScore;
  if (name == "MaxScore" || name == "max") return CombinationStrategy::MaxScore;
  if (name == "WeightedAvgScore" || name == "wavg") return CombinationStrategy::WeightedAvgScore;
  if (name == "WeightedMaxScore" || name == "wmax") return CombinationStrategy::WeightedMaxScore;
  throw Error("unknown combination strategy '" + name + "'");
}

double combine_scores(const std::vector<double>& pu, const std::vector<double>& pv,
                      CombinationStrategy strategy, const PairScorer& base) {
  if (pu.empty() || pv.empty()) throw Error("combine_sense_scores: empty sense list");
  if (pu.size() == 1 && pv.size() == 1) return base(0, 0);

  const bool weighted = strategy == CombinationStrategy::WeightedAvgScore ||
                        strategy == CombinationStrategy::WeightedMaxScore;
  if (weighted) {
    for (double p : pu) {
      if (!(p > 0.0)) throw Error("combine_sense_scores: weighted strategy needs positive priors");
    }
    for (double p : pv) {
      if (!(p > 0.0)) throw Error("combine_sense_scores: weighted strategy needs positive priors");
    }
    // Equal weights cancel; skip the products so the result matches the
    // unweighted strategy bit for bit.
    auto uniform = [](const std::vector<double>& p) {
      return std::all_of(p.begin(), p.end(), [&](double x) { return x == p.front(); });
    };
    if (uniform(pu) && uniform(pv)) {
      strategy = strategy == CombinationStrategy::WeightedAvgScore ? CombinationStrategy::AvgScore
                                                                    : CombinationStrategy::MaxScore;
    }
  }

  double sum = 0.0;
  double weight_sum = 0.0;
  double best = 0.0;
  double best_weight = 0.0;
  for (std::size_t i = 0; i < pu.size(); ++i) {
    for (std::size_t j = 0; j < pv.size(); ++j) {
      const double s = base(i, j);
      switch (strategy) {
        case CombinationStrategy::AvgScore:
          sum += s;
          break;
        case CombinationStrategy::MaxScore:
          best = std::max(best, s);
          break;
        case CombinationStrategy::WeightedAvgScore:
          sum += pu[i] * pv[j] * s;
          weight_sum += pu[i] * pv[j];
          break;
        case CombinationStrategy::WeightedMaxScore:
          best = std::max(best, pu[i] * pv[j] * s);
          best_weight = std::max(best_weight, pu[i] * pv[j]);
          break;
      }
    }
  }
  switch (strategy) {
    case CombinationStrategy::AvgScore:
      return sum / static_cast<double>(pu.size() * pv.size());
    case CombinationStrategy::MaxScore:
      return best;
    case CombinationStrategy::WeightedAvgScore:
      return sum / weight_sum;
    case CombinationStrategy::WeightedMaxScore:
      return best / best_weight;
  }
  return 0.0;
}

EntailmentScore combine_sense_scores(const SenseList& su, const SenseList& sv,
                                     CombinationStrategy strategy, const VectorScorer& base) {
  std::vector<double> pu, pv;
  for (const auto& s : su) pu.push_back(s.prior);
  for (const auto& s : sv) pv.push_back(s.prior);
  EntailmentScore out;
  out.value = combine_scores(pu, pv, strategy, [&](std::size_t i, std::size_t j) {
    return base(su[i].prototype, sv[j].prototype);
  });
  return out;
}

BalapincScorer::BalapincScorer(const SenseInventory& weighted, std::size_t cap) {
  for (const auto& [word, senses] : weighted) {
    auto& list = prepared_[word];
    for (const auto& s : senses) list.push_back(prepare(s.prototype, s.prior, cap));
  }
}

double BalapincScorer::score(const std::string& u, const std::string& v,
                             CombinationStrategy strategy) const {
  auto a = prepared_.find(u);
  auto b = prepared_.find(v);
  if (a == prepared_.end()) throw Error("balAPinc: no senses for '" + u + "'");
  if (b == prepared_.end()) throw Error("balAPinc: no senses for '" + v + "'");
  std::vector<double> pu, pv;
  for (const auto& p : a->second) pu.push_back(p.prior);
  for (const auto& p : b->second) pv.push_back(p.prior);
  return combine_scores(pu, pv, strategy, [&](std::size_t i, std::size_t j) {
    return balapinc(a->second[i], b->second[j]);
  });
}

std::vector<double> BalapincScorer::score_all(
    const std::vector<std::pair<std::string, std::string>>& pairs, CombinationStrategy s) const {
  std::vector<double> out(pairs.size());
  const long n = static_cast<long>(pairs.size());
  std::string failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = score(pairs[i].first, pairs[i].second, s);
    } catch (const Error& e) {
#pragma omp critical(balapinc_failure)
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw Error(failure);
  return out;
}

std::vector<double> BalapincScorer::score_all_serial(
    const std::vector<std::pair<std::string, std::string>>& pairs, CombinationStrategy s) const {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [u, v] : pairs) out.push_back(score(u, v, s));
  return out;
}

void write_score_dump(std::ostream& out, const std::vector<ScoreLine>& lines) {
  for (const auto& l : lines) {
    out << l.u << '\t' << l.v << '\t' << l.strategy << '\t' << format_double(l.score) << '\n';
  }
}

}  // namespace lexent
