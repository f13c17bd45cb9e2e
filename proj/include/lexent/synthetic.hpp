#pragma once

// Synthetic data with known structure, used by the acceptance suite, the
// benchmarks and the `synth` CLI command.

#include <cstdint>
#include <string>
#include <vector>

#include "lexent/corpus.hpp"
#include "lexent/harness.hpp"
#include "lexent/lexsim.hpp"

namespace lexent::synth {

// Occurrences of one target whose contexts come from one of two topic
// vocabularies, with a fixed share of every context drawn from a background
// vocabulary shared by both topics. Returned already merged.
struct PlantedTopics {
  OccurrenceSet occurrences;
  std::vector<int> topic;                     // per occurrence, 0 or 1
  std::vector<std::vector<bool>> background;  // per occurrence, per token
};

struct PlantedTopicsSpec {
  std::size_t occurrences = 100;
  std::size_t tokens_per_occurrence = 10;
  double background_share = 0.2;
  std::size_t topic_vocabulary = 20;
  std::size_t background_vocabulary = 10;
  std::uint64_t seed = 1;
};

PlantedTopics planted_topics(const PlantedTopicsSpec& spec);

// Fraction of occurrence pairs on which two labelings agree about being
// together or apart (Rand index).
double rand_index(const std::vector<int>& a, const std::vector<int>& b);

// A corpus of sentences built around a concept hierarchy. Each domain has a
// broad "hypernym" word and several narrower "hyponym" words whose contexts
// are subsets of the domain's context vocabulary. A share of the hyponyms is
// polysemous: each of their two senses belongs to a different domain and
// entails that domain's hypernym.
struct PolysemySpec {
  std::size_t domains = 10;
  std::size_t hyponyms_per_domain = 10;
  double polysemous_share = 0.2;
  std::size_t context_words_per_domain = 30;
  std::size_t general_words = 30;
  std::size_t sentences_per_word = 120;
  std::size_t sentence_context = 8;
  double general_share = 0.25;
  double minor_sense_share = 0.4;
  std::uint64_t seed = 7;
};

struct PolysemyBenchmark {
  std::vector<Sentence> corpus;
  std::vector<LabeledPair> pairs;
  Taxonomy taxonomy;
  std::string taxonomy_text;  // the taxonomy in file format
  std::vector<std::string> polysemous_words;
};

PolysemyBenchmark polysemy_benchmark(const PolysemySpec& spec);

}  // namespace lexent::synth
