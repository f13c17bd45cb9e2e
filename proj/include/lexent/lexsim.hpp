#pragma once

// Taxonomy-based relatedness: Wu-Palmer over a hypernym DAG and the
// best-match bag similarity (LLM) used to compare occurrence contexts.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexent {

class Taxonomy {
 public:
  // Lines: synset_id \t parent_id_or_- \t comma,separated,words. A synset may
  // be listed on several lines to give it several parents. Exactly one root.
  static Taxonomy parse(std::istream& in);
  static Taxonomy load(const std::string& path);

  std::size_t size() const { return ids_.size(); }
  const std::string& root() const { return ids_[root_]; }
  std::size_t depth(std::string_view synset) const;
  bool has_word(std::string_view word) const { return lexicon_.count(std::string(word)) > 0; }
  std::vector<std::string> words() const;

  // Max over the two words' synset pairs of 2 d(lcs) / (d(s1) + d(s2)).
  // -1 when either word is out of vocabulary.
  double wu_palmer_raw(std::string_view w1, std::string_view w2) const;

 private:
  std::size_t index_of(std::string_view synset) const;
  double synset_similarity(std::size_t a, std::size_t b) const;

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::size_t> depth_;
  // Sorted ancestor sets, each including the synset itself.
  std::vector<std::vector<std::size_t>> ancestors_;
  std::unordered_map<std::string, std::vector<std::size_t>> lexicon_;
  std::size_t root_ = 0;
};

struct SimilarityScore {
  double value = 0.0;
  bool out_of_vocabulary = false;
};

SimilarityScore wu_palmer(std::string_view w1, std::string_view w2, const Taxonomy& t);

using WordSimilarity = std::function<double(const std::string&, const std::string&)>;
WordSimilarity wu_palmer_metric(const Taxonomy& t);

// (sum over v in S2 of max over u in S1 of sim(u, v)) / |S2|, where S2 is the
// smaller bag (the second argument on equal sizes). Bags keep multiplicity.
// Zero when either bag is empty.
double llm_similarity(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
                      const WordSimilarity& sim);
double llm_similarity(const std::vector<std::string>& s1, const std::vector<std::string>& s2,
                      const Taxonomy& t);

// Dense word x word similarity cache over a fixed vocabulary.
class SimilarityTable {
 public:
  SimilarityTable() = default;
  SimilarityTable(std::vector<std::string> words, std::vector<double> values);

  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  // Index of a word, or size() if absent.
  std::size_t index(const std::string& word) const;
  double at(std::size_t i, std::size_t j) const { return values_[i * words_.size() + j]; }
  bool operator==(const SimilarityTable& o) const { return words_ == o.words_ && values_ == o.values_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> values_;
};

// Fills the table in parallel over rows.
SimilarityTable build_similarity_table(const std::vector<std::string>& words,
                                       const WordSimilarity& sim);
SimilarityTable build_similarity_table_serial(const std::vector<std::string>& words,
                                              const WordSimilarity& sim);

// llm_similarity over bags of table indices.
double llm_similarity(std::span<const std::uint32_t> s1, std::span<const std::uint32_t> s2,
                      const SimilarityTable& table);

}  // namespace lexent
