#pragma once

// Occurrence extraction: windowed contexts around target words, richness
// sampling, and top-frequency feature pruning.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lexent {

using Sentence = std::vector<std::string>;

inline constexpr std::size_t kDefaultWindow = 4;
inline constexpr std::size_t kDefaultSampleSize = 1000;
inline constexpr std::size_t kDefaultFeatureCap = 500;

struct Occurrence {
  std::string target;
  // "<sentence hash>:<token position>". Stable across runs and platforms.
  std::string source_id;
  std::vector<std::string> left;
  std::vector<std::string> right;

  std::size_t context_size() const { return left.size() + right.size(); }
  // left followed by right.
  std::vector<std::string> context() const;

  bool operator==(const Occurrence&) const = default;
};

struct OccurrenceSet {
  std::string target;
  std::vector<Occurrence> occurrences;
  std::set<std::string> feature_alphabet;
  // Once merged, each occurrence keeps its whole context bag in `left` and
  // `right` is empty.
  bool merged = false;

  bool operator==(const OccurrenceSet&) const = default;
};

// Whitespace split, lowercase, strip punctuation; tokens that end up empty
// are dropped.
Sentence tokenize(std::string_view line);

// One sentence per non-empty line.
std::vector<Sentence> read_corpus(std::istream& in);

// Every appearance of a target yields one occurrence with up to `window`
// tokens on each side, truncated at the sentence boundary. Targets that never
// occur map to empty sets.
std::map<std::string, OccurrenceSet> extract_occurrences(
    const std::vector<Sentence>& corpus, const std::set<std::string>& targets,
    std::size_t window = kDefaultWindow);

// Drops duplicate token sequences, then keeps the `n` occurrences with the
// most context tokens (ties: source_id ascending).
OccurrenceSet sample_occurrences(const OccurrenceSet& occs, std::size_t n);

// Merges left/right contexts and restricts every occurrence to the `top`
// most frequent tokens of the set (ties: lexicographic).
OccurrenceSet prune_features(const OccurrenceSet& occs, std::size_t top);

// extract -> sample for every target, as the `ingest` command does. Pruning
// is left to clustering so prototypes can be built from full contexts.
// Targets that never occur are absent from the result.
std::map<std::string, OccurrenceSet> ingest_corpus(const std::vector<Sentence>& corpus,
                                                   const std::set<std::string>& targets,
                                                   std::size_t window = kDefaultWindow,
                                                   std::size_t sample_size = kDefaultSampleSize);

// Occurrence file: target \t source_id \t left tokens \t right tokens, with
// "_" for an empty side.
void write_occurrences(std::ostream& out, const std::map<std::string, OccurrenceSet>& sets);
std::map<std::string, OccurrenceSet> read_occurrences(std::istream& in);

}  // namespace lexent
