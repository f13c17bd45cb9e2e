#include "lexent/lexsim.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <set>

#include "lexent/common.hpp"

namespace lexent {

Taxonomy Taxonomy::parse(std::istream& in) {
  struct Line {
    std::string id, parent;
    std::vector<std::string> words;
    std::size_t line_no;
  };
  std::vector<Line> lines;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (trim(text).empty() || text[0] == '#') continue;
    auto fields = split(text, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error("taxonomy line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    }
    Line l{fields[0], fields[1], {}, line_no};
    if (l.id.empty()) throw Error("taxonomy line " + std::to_string(line_no) + ": empty synset id");
    if (fields.size() == 3) {
      for (auto& w : split(fields[2], ',')) {
        auto word = std::string(trim(w));
        if (!word.empty()) l.words.push_back(std::move(word));
      }
    }
    lines.push_back(std::move(l));
  }

  Taxonomy t;
  for (const auto& l : lines) {
    if (t.index_.emplace(l.id, t.ids_.size()).second) t.ids_.push_back(l.id);
  }
  if (t.ids_.empty()) throw Error("taxonomy: no synsets");
  t.parents_.resize(t.ids_.size());
  std::size_t roots = 0;
  for (const auto& l : lines) {
    const std::size_t self = t.index_.at(l.id);
    if (l.parent == "-") {
      ++roots;
      t.root_ = self;
    } else {
      auto it = t.index_.find(l.parent);
      if (it == t.index_.end()) {
        throw Error("taxonomy line " + std::to_string(l.line_no) + ": unknown parent id '" +
                    l.parent + "'");
      }
      if (it->second == self) throw Error("cyclic taxonomy");
      auto& ps = t.parents_[self];
      if (std::find(ps.begin(), ps.end(), it->second) == ps.end()) ps.push_back(it->second);
    }
    for (const auto& w : l.words) {
      auto& senses = t.lexicon_[w];
      if (std::find(senses.begin(), senses.end(), self) == senses.end()) senses.push_back(self);
    }
  }
  if (roots != 1) throw Error("taxonomy: expected exactly one root line, found " + std::to_string(roots));
  if (!t.parents_[t.root_].empty()) throw Error("taxonomy: root '" + t.ids_[t.root_] + "' has a parent");

  // Kahn's algorithm from the root down detects cycles; BFS gives shortest depths.
  const std::size_t n = t.ids_.size();
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> in_degree(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p : t.parents_[c]) {
      children[p].push_back(c);
      ++in_degree[c];
    }
  }
  std::vector<std::size_t> order;
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_degree[i] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    const std::size_t x = ready.front();
    ready.pop_front();
    order.push_back(x);
    for (std::size_t c : children[x]) {
      if (--in_degree[c] == 0) ready.push_back(c);
    }
  }
  if (order.size() != n) throw Error("cyclic taxonomy");

  t.depth_.assign(n, 0);
  t.depth_[t.root_] = 1;
  std::deque<std::size_t> queue{t.root_};
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t c : children[x]) {
      if (t.depth_[c] == 0) {
        t.depth_[c] = t.depth_[x] + 1;
        queue.push_back(c);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (t.depth_[i] == 0) throw Error("taxonomy: synset '" + t.ids_[i] + "' is not reachable from the root");
  }

  t.ancestors_.resize(n);
  for (std::size_t x : order) {
    std::set<std::size_t> anc{x};
    for (std::size_t p : t.parents_[x]) anc.insert(t.ancestors_[p].begin(), t.ancestors_[p].end());
    t.ancestors_[x].assign(anc.begin(), anc.end());
  }
  return t;
}

Taxonomy Taxonomy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open taxonomy file '" + path + "'");
  return parse(in);
}

std::size_t Taxonomy::index_of(std::string_view synset) const {
  auto it = index_.find(std::string(synset));
  if (it == index_.end()) throw Error("taxonomy has no synset '" + std::string(synset) + "'");
  return it->second;
}

std::size_t Taxonomy::depth(std::string_view synset) const { return depth_[index_of(synset)]; }

std::vector<std::string> Taxonomy::words() const {
  std::vector<std::string> out;
  out.reserve(lexicon_.size());
  for (const auto& [w, s] : lexicon_) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

double Taxonomy::synset_similarity(std::size_t a, std::size_t b) const {
  if (a == b) return 1.0;
  const auto& xa = ancestors_[a];
  const auto& xb = ancestors_[b];
  std::size_t lcs_depth = 0;
  auto i = xa.begin();
  auto j = xb.begin();
  while (i != xa.end() && j != xb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      lcs_depth = std::max(lcs_depth, depth_[*i]);
      ++i;
      ++j;
    }
  }
  // Shortest-path depths in a DAG can make an ancestor as deep as its
  // descendant; the score is capped at 1.
  const double s = 2.0 * static_cast<double>(lcs_depth) / static_cast<double>(depth_[a] + depth_[b]);
  return std::min(1.0, s);
}

double Taxonomy::wu_palmer_raw(std::string_view w1, std::string_view w2) const {
  auto a = lexicon_.find(std::string(w1));
  auto b = lexicon_.find(std::string(w2));
  if (a == lexicon_.end() || b == lexicon_.end()) return -1.0;
  double best = 0.0;
  for (std::size_t s1 : a->second) {
    for (std::size_t s2 : b->second) best = std::max(best, synset_similarity(s1, s2));
  }
  return best;
}

SimilarityScore wu_palmer(std::string_view w1, std::string_view w2, const Taxonomy& t) {
  const double raw = t.wu_palmer_raw(w1, w2);
  if (raw < 0.0) return {0.0, true};
  return {raw, false};
}

WordSimilarity wu_palmer_metric(const Taxonomy& t) {
  return [&t](const std::string& a, const std::string& b) { return wu_palmer(a, b, t).value; };
}

double llm_similarity(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
                      const WordSimilarity& sim) {
  const auto& big = s1.size() < s2.size() ? s2 : s1;
  const auto& small = s1.size() < s2.size() ? s1 : s2;
  if (small.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& v : small) {
    double best = 0.0;
    for (const auto& u : big) best = std::max(best, sim(u, v));
    sum += best;
  }
  return sum / static_cast<double>(small.size());
}

double llm_similarity(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
                      const Taxonomy& t) {
  return llm_similarity(s1, s2, wu_palmer_metric(t));
}

SimilarityTable::SimilarityTable(std::vector<std::string> words, std::vector<double> values)
    : words_(std::move(words)), values_(std::move(values)) {
  if (values_.size() != words_.size() * words_.size()) {
    throw Error("SimilarityTable: value count does not match vocabulary");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
}

std::size_t SimilarityTable::index(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? words_.size() : it->second;
}

SimilarityTable build_similarity_table(const std::vector<std::string>& words,
                                       const WordSimilarity& sim) {
  const std::size_t n = words.size();
  std::vector<double> values(n * n);
  const long rows = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = sim(words[i], words[j]);
  }
  return SimilarityTable(words, std::move(values));
}

SimilarityTable build_similarity_table_serial(const std::vector<std::string>& words,
                                              const WordSimilarity& sim) {
  const std::size_t n = words.size();
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = sim(words[i], words[j]);
  }
  return SimilarityTable(words, std::move(values));
}

double llm_similarity(std::span<const std::uint32_t> s1, std::span<const std::uint32_t> s2,
                      const SimilarityTable& table) {
  const auto big = s1.size() < s2.size() ? s2 : s1;
  const auto small = s1.size() < s2.size() ? s1 : s2;
  if (small.empty()) return 0.0;
  double sum = 0.0;
  for (std::uint32_t v : small) {
    double best = 0.0;
    for (std::uint32_t u : big) best = std::max(best, table.at(u, v));
    sum += best;
  }
  return sum / static_cast<double>(small.size());
}

}  // namespace lexent
