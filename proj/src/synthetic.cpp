#include "lexent/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "lexent/common.hpp"

namespace lexent::synth {

PlantedTopics planted_topics(const PlantedTopicsSpec& spec) {
  if (spec.tokens_per_occurrence == 0 || spec.topic_vocabulary == 0 || spec.background_vocabulary == 0) {
    throw Error("planted_topics: vocabularies and contexts must be non-empty");
  }
  Rng rng(spec.seed);
  const auto n_background = static_cast<std::size_t>(
      std::llround(spec.background_share * static_cast<double>(spec.tokens_per_occurrence)));
  PlantedTopics out;
  out.occurrences.target = "target";
  out.occurrences.merged = true;
  for (std::size_t o = 0; o < spec.occurrences; ++o) {
    const int topic = static_cast<int>(o % 2);
    std::vector<std::size_t> positions(spec.tokens_per_occurrence);
    for (std::size_t j = 0; j < positions.size(); ++j) positions[j] = j;
    rng.shuffle(positions);
    std::vector<bool> background(spec.tokens_per_occurrence, false);
    for (std::size_t j = 0; j < n_background; ++j) background[positions[j]] = true;

    Occurrence occ;
    occ.target = out.occurrences.target;
    occ.source_id = "planted:" + std::to_string(o);
    for (std::size_t j = 0; j < spec.tokens_per_occurrence; ++j) {
      std::string token = background[j] ? "bg" + std::to_string(rng.below(spec.background_vocabulary))
                                        : std::string(topic ? "tb" : "ta") +
                                              std::to_string(rng.below(spec.topic_vocabulary));
      out.occurrences.feature_alphabet.insert(token);
      occ.left.push_back(std::move(token));
    }
    out.occurrences.occurrences.push_back(std::move(occ));
    out.topic.push_back(topic);
    out.background.push_back(std::move(background));
  }
  return out;
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw Error("rand_index: labelings differ in length");
  if (a.size() < 2) return 1.0;
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      ++total;
      agree += (a[i] == a[j]) == (b[i] == b[j]);
    }
  }
  return static_cast<double>(agree) / static_cast<double>(total);
}

namespace {

std::string hypernym_word(std::size_t d) { return "topic" + std::to_string(d); }
std::string hyponym_word(std::size_t d, std::size_t j) {
  return "item" + std::to_string(d) + "x" + std::to_string(j);
}
std::string context_word(std::size_t d, std::size_t i) {
  return "c" + std::to_string(d) + "w" + std::to_string(i);
}
std::string general_word(std::size_t i) { return "g" + std::to_string(i); }

constexpr std::size_t kContextGroup = 5;

}  // namespace

PolysemyBenchmark polysemy_benchmark(const PolysemySpec& spec) {
  if (spec.domains < 2) throw Error("polysemy_benchmark: need at least two domains");
  if (spec.hyponyms_per_domain == 0 || spec.context_words_per_domain < 2 || spec.sentence_context == 0) {
    throw Error("polysemy_benchmark: empty vocabulary or context");
  }
  Rng rng(spec.seed);
  const std::size_t half_vocab = (spec.context_words_per_domain + 1) / 2;

  struct SenseSpec {
    std::size_t domain;
    std::vector<std::string> vocabulary;
  };
  struct WordSpec {
    std::string word;
    std::vector<SenseSpec> senses;
  };
  std::vector<WordSpec> words;
  for (std::size_t d = 0; d < spec.domains; ++d) {
    WordSpec hyper{hypernym_word(d), {SenseSpec{d, {}}}};
    for (std::size_t i = 0; i < spec.context_words_per_domain; ++i) {
      hyper.senses[0].vocabulary.push_back(context_word(d, i));
    }
    words.push_back(std::move(hyper));
  }
  auto subset_of = [&](std::size_t d) {
    std::vector<std::size_t> idx(spec.context_words_per_domain);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    idx.resize(half_vocab);
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> vocab;
    for (std::size_t i : idx) vocab.push_back(context_word(d, i));
    return vocab;
  };
  std::vector<std::size_t> hyponym_ids;
  for (std::size_t d = 0; d < spec.domains; ++d) {
    for (std::size_t j = 0; j < spec.hyponyms_per_domain; ++j) {
      hyponym_ids.push_back(words.size());
      words.push_back(WordSpec{hyponym_word(d, j), {SenseSpec{d, subset_of(d)}}});
    }
  }

  const auto n_poly = static_cast<std::size_t>(
      std::llround(spec.polysemous_share * static_cast<double>(hyponym_ids.size())));
  std::vector<std::size_t> shuffled = hyponym_ids;
  rng.shuffle(shuffled);
  shuffled.resize(n_poly);
  std::sort(shuffled.begin(), shuffled.end());

  PolysemyBenchmark out;
  for (std::size_t id : shuffled) {
    WordSpec& w = words[id];
    std::size_t other = rng.below(spec.domains - 1);
    if (other >= w.senses[0].domain) ++other;
    w.senses.push_back(SenseSpec{other, subset_of(other)});
    out.polysemous_words.push_back(w.word);
  }

  const std::size_t left = spec.sentence_context / 2;
  const std::size_t right = spec.sentence_context - left;
  const auto minor_count = static_cast<std::size_t>(
      std::llround(spec.minor_sense_share * static_cast<double>(spec.sentences_per_word)));
  for (const WordSpec& w : words) {
    std::vector<std::size_t> sense_of(spec.sentences_per_word, 0);
    if (w.senses.size() > 1) {
      for (std::size_t s = 0; s < minor_count; ++s) sense_of[s] = 1;
      rng.shuffle(sense_of);
    }
    for (std::size_t s = 0; s < spec.sentences_per_word; ++s) {
      const std::vector<std::string>& vocab = w.senses[sense_of[s]].vocabulary;
      auto draw = [&] {
        if (spec.general_words > 0 && rng.uniform() < spec.general_share) {
          return general_word(rng.below(spec.general_words));
        }
        return vocab[rng.below(vocab.size())];
      };
      Sentence sentence;
      for (std::size_t i = 0; i < left; ++i) sentence.push_back(draw());
      sentence.push_back(w.word);
      for (std::size_t i = 0; i < right; ++i) sentence.push_back(draw());
      out.corpus.push_back(std::move(sentence));
    }
  }

  // Positives: each sense of a hyponym entails its domain's hypernym.
  // Negatives: the reversed pairs and one unrelated hypernym per hyponym.
  for (std::size_t id : hyponym_ids) {
    const WordSpec& w = words[id];
    std::set<std::size_t> domains;
    for (const SenseSpec& s : w.senses) {
      domains.insert(s.domain);
      out.pairs.push_back(LabeledPair{w.word, hypernym_word(s.domain), true});
      out.pairs.push_back(LabeledPair{hypernym_word(s.domain), w.word, false});
    }
    std::size_t unrelated = rng.below(spec.domains - domains.size());
    for (std::size_t d : domains) {
      if (unrelated >= d) ++unrelated;
    }
    out.pairs.push_back(LabeledPair{w.word, hypernym_word(unrelated), false});
  }

  // Taxonomy: root > domain > context group > context word, with the
  // domain's words attached under their domains.
  std::ostringstream tax;
  tax << "entity\t-\t\n";
  tax << "general\tentity\t\n";
  for (std::size_t i = 0; i < spec.general_words; ++i) {
    tax << "s." << general_word(i) << "\tgeneral\t" << general_word(i) << '\n';
  }
  for (std::size_t d = 0; d < spec.domains; ++d) {
    const std::string dom = "domain" + std::to_string(d);
    tax << dom << "\tentity\t" << hypernym_word(d) << '\n';
    for (std::size_t i = 0; i < spec.context_words_per_domain; ++i) {
      const std::string group = dom + ".g" + std::to_string(i / kContextGroup);
      if (i % kContextGroup == 0) tax << group << '\t' << dom << "\t\n";
      tax << "s." << context_word(d, i) << '\t' << group << '\t' << context_word(d, i) << '\n';
    }
  }
  for (std::size_t id : hyponym_ids) {
    const WordSpec& w = words[id];
    for (const SenseSpec& s : w.senses) {
      tax << "s." << w.word << "\tdomain" << s.domain << '\t' << w.word << '\n';
    }
  }
  out.taxonomy_text = tax.str();
  std::istringstream tax_in(out.taxonomy_text);
  out.taxonomy = Taxonomy::parse(tax_in);
  return out;
}

}  // namespace lexent::synth
