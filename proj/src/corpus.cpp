#include "lexent/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "lexent/common.hpp"

namespace lexent {

std::vector<std::string> Occurrence::context() const {
  std::vector<std::string> out = left;
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

Sentence tokenize(std::string_view line) {
  Sentence tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (unsigned char c : line) {
    if (std::isspace(c)) {
      flush();
    } else if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return tokens;
}

std::vector<Sentence> read_corpus(std::istream& in) {
  std::vector<Sentence> corpus;
  std::string line;
  while (std::getline(in, line)) {
    Sentence s = tokenize(line);
    if (!s.empty()) corpus.push_back(std::move(s));
  }
  return corpus;
}

std::map<std::string, OccurrenceSet> extract_occurrences(
    const std::vector<Sentence>& corpus, const std::set<std::string>& targets,
    std::size_t window) {
  if (targets.empty()) throw Error("extract_occurrences: no targets");
  if (window == 0) throw Error("extract_occurrences: window must be positive");

  std::map<std::string, OccurrenceSet> result;
  for (const auto& t : targets) result[t].target = t;

  for (const auto& sentence : corpus) {
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(stable_hash(join(sentence, " "))));
    for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
      auto it = result.find(sentence[pos]);
      if (it == result.end()) continue;
      Occurrence occ;
      occ.target = sentence[pos];
      occ.source_id = std::string(hash) + ":" + std::to_string(pos);
      const std::size_t begin = pos >= window ? pos - window : 0;
      const std::size_t end = std::min(sentence.size(), pos + 1 + window);
      occ.left.assign(sentence.begin() + begin, sentence.begin() + pos);
      occ.right.assign(sentence.begin() + pos + 1, sentence.begin() + end);
      for (const auto& tok : occ.left) it->second.feature_alphabet.insert(tok);
      for (const auto& tok : occ.right) it->second.feature_alphabet.insert(tok);
      it->second.occurrences.push_back(std::move(occ));
    }
  }
  return result;
}

OccurrenceSet sample_occurrences(const OccurrenceSet& occs, std::size_t n) {
  if (n == 0) throw Error("sample_occurrences: n must be positive");

  std::vector<const Occurrence*> order;
  order.reserve(occs.occurrences.size());
  for (const auto& o : occs.occurrences) order.push_back(&o);
  std::sort(order.begin(), order.end(), [](const Occurrence* a, const Occurrence* b) {
    if (a->context_size() != b->context_size()) return a->context_size() > b->context_size();
    return a->source_id < b->source_id;
  });

  // Duplicates share a context size, so the first one seen in this order is
  // the survivor with the smallest source_id.
  std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> seen;
  OccurrenceSet out;
  out.target = occs.target;
  out.merged = occs.merged;
  for (const Occurrence* o : order) {
    if (out.occurrences.size() == n) break;
    if (!seen.emplace(o->left, o->right).second) continue;
    out.occurrences.push_back(*o);
  }
  for (const auto& o : out.occurrences) {
    for (const auto& tok : o.left) out.feature_alphabet.insert(tok);
    for (const auto& tok : o.right) out.feature_alphabet.insert(tok);
  }
  return out;
}

OccurrenceSet prune_features(const OccurrenceSet& occs, std::size_t top) {
  if (top == 0) throw Error("prune_features: top must be positive");

  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& o : occs.occurrences) {
    for (const auto& tok : o.left) ++freq[tok];
    for (const auto& tok : o.right) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > top) ranked.resize(top);

  OccurrenceSet out;
  out.target = occs.target;
  out.merged = true;
  for (auto& [tok, count] : ranked) out.feature_alphabet.insert(tok);
  out.occurrences.reserve(occs.occurrences.size());
  for (const auto& o : occs.occurrences) {
    Occurrence kept;
    kept.target = o.target;
    kept.source_id = o.source_id;
    for (const auto& tok : o.context()) {
      if (out.feature_alphabet.count(tok)) kept.left.push_back(tok);
    }
    out.occurrences.push_back(std::move(kept));
  }
  return out;
}

namespace {

std::string encode_side(const std::vector<std::string>& tokens) {
  return tokens.empty() ? "_" : join(tokens, " ");
}

std::vector<std::string> decode_side(const std::string& field) {
  if (field == "_") return {};
  std::vector<std::string> tokens;
  for (auto& t : split(field, ' ')) {
    if (!t.empty()) tokens.push_back(std::move(t));
  }
  return tokens;
}

}  // namespace

std::map<std::string, OccurrenceSet> ingest_corpus(const std::vector<Sentence>& corpus,
                                                   const std::set<std::string>& targets,
                                                   std::size_t window, std::size_t sample_size) {
  std::map<std::string, OccurrenceSet> out;
  for (auto& [target, occs] : extract_occurrences(corpus, targets, window)) {
    if (occs.occurrences.empty()) continue;
    out.emplace(target, sample_occurrences(occs, sample_size));
  }
  return out;
}

void write_occurrences(std::ostream& out, const std::map<std::string, OccurrenceSet>& sets) {
  for (const auto& [target, set] : sets) {
    for (const auto& o : set.occurrences) {
      out << o.target << '\t' << o.source_id << '\t' << encode_side(o.left) << '\t'
          << encode_side(o.right) << '\n';
    }
  }
}

std::map<std::string, OccurrenceSet> read_occurrences(std::istream& in) {
  std::map<std::string, OccurrenceSet> sets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw Error("occurrence file line " + std::to_string(line_no) +
                  ": expected 4 tab-separated fields");
    }
    Occurrence o{fields[0], fields[1], decode_side(fields[2]), decode_side(fields[3])};
    auto& set = sets[o.target];
    set.target = o.target;
    for (const auto& tok : o.left) set.feature_alphabet.insert(tok);
    for (const auto& tok : o.right) set.feature_alphabet.insert(tok);
    set.occurrences.push_back(std::move(o));
  }
  return sets;
}

}  // namespace lexent
