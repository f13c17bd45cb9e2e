#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "lexent/common.hpp"
#include "lexent/corpus.hpp"

using namespace lexent;

namespace {

Occurrence occ(std::string id, std::vector<std::string> left, std::vector<std::string> right = {}) {
  return Occurrence{"w", std::move(id), std::move(left), std::move(right)};
}

OccurrenceSet set_of(std::vector<Occurrence> occs) {
  OccurrenceSet s;
  s.target = "w";
  s.occurrences = std::move(occs);
  for (const auto& o : s.occurrences) {
    for (const auto& t : o.context()) s.feature_alphabet.insert(t);
  }
  return s;
}

std::vector<std::string> toks(std::string_view text) { return tokenize(text); }

}  // namespace

TEST_CASE("tokenize lowercases and strips punctuation") {
  CHECK(tokenize("The Dog, barked!  Loudly.") == Sentence{"the", "dog", "barked", "loudly"});
  CHECK(tokenize("  ...  ").empty());
}

TEST_CASE("window of four around an interior target") {
  const auto m = extract_occurrences({toks("the quick brown fox jumps over the lazy dog")}, {"jumps"}, 4);
  const auto& o = m.at("jumps").occurrences.at(0);
  CHECK(o.left == toks("the quick brown fox"));
  CHECK(o.right == toks("over the lazy dog"));
}

TEST_CASE("window truncates at the sentence start") {
  const auto m = extract_occurrences({toks("jumps over it")}, {"jumps"}, 4);
  const auto& o = m.at("jumps").occurrences.at(0);
  CHECK(o.left.empty());
  CHECK(o.right == toks("over it"));
}

TEST_CASE("absent target yields an empty set") {
  const auto m = extract_occurrences({toks("a b c")}, {"zebra"}, 4);
  CHECK(m.at("zebra").occurrences.empty());
}

TEST_CASE("no targets is an error") {
  CHECK_THROWS_WITH_AS(extract_occurrences({toks("a b")}, {}, 4), doctest::Contains("no targets"), Error);
}

TEST_CASE("occurrence contexts respect the window and share the target") {
  std::vector<Sentence> corpus;
  Rng r(5);
  for (int s = 0; s < 50; ++s) {
    Sentence sent;
    const std::size_t len = 1 + r.below(15);
    for (std::size_t i = 0; i < len; ++i) sent.push_back(r.below(3) == 0 ? "t" : "w" + std::to_string(r.below(6)));
    corpus.push_back(sent);
  }
  for (std::size_t window : {1u, 2u, 4u}) {
    const auto m = extract_occurrences(corpus, {"t", "w1"}, window);
    for (const auto& [target, set] : m) {
      for (const auto& o : set.occurrences) {
        CHECK(o.target == target);
        CHECK(o.left.size() <= window);
        CHECK(o.right.size() <= window);
      }
    }
  }
}

TEST_CASE("source ids are stable across runs") {
  const std::vector<Sentence> corpus{toks("a t b"), toks("t c")};
  CHECK(extract_occurrences(corpus, {"t"}) == extract_occurrences(corpus, {"t"}));
}

TEST_CASE("sample keeps everything under supply") {
  const auto s = set_of({occ("1", {"a"}), occ("2", {"b"}), occ("3", {"c"})});
  CHECK(sample_occurrences(s, 1000).occurrences.size() == 3);
}

TEST_CASE("sample drops identical token sequences") {
  const auto s = set_of({occ("1", {"a", "b"}), occ("2", {"a", "b"})});
  CHECK(sample_occurrences(s, 10).occurrences.size() == 1);
}

TEST_CASE("sample prefers rich contexts") {
  const auto s = set_of({occ("x", std::vector<std::string>(8, "a")), occ("y", {"b", "c", "d"}),
                         occ("z", {"e", "f", "g", "h", "i"})});
  const auto out = sample_occurrences(s, 2);
  REQUIRE(out.occurrences.size() == 2);
  CHECK(out.occurrences[0].source_id == "x");
  CHECK(out.occurrences[1].source_id == "z");
}

TEST_CASE("sample breaks richness ties by source id") {
  const auto s = set_of({occ("b", {"x"}), occ("a", {"y"}), occ("c", {"z"})});
  const auto out = sample_occurrences(s, 2);
  CHECK(out.occurrences[0].source_id == "a");
  CHECK(out.occurrences[1].source_id == "b");
}

TEST_CASE("sample size is min(n, unique)") {
  Rng r(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Occurrence> v;
    const std::size_t m = r.below(20);
    for (std::size_t i = 0; i < m; ++i) v.push_back(occ(std::to_string(i), {"t" + std::to_string(r.below(5))}));
    const auto s = set_of(v);
    std::set<std::vector<std::string>> unique;
    for (const auto& o : v) unique.insert(o.context());
    const std::size_t n = 1 + r.below(10);
    CHECK(sample_occurrences(s, n).occurrences.size() == std::min(n, unique.size()));
  }
}

TEST_CASE("prune under the cap only merges sides") {
  std::vector<Occurrence> v;
  for (int i = 0; i < 120; ++i) v.push_back(occ(std::to_string(i), {"l" + std::to_string(i)}, {"r"}));
  const auto out = prune_features(set_of(v), 500);
  CHECK(out.merged);
  CHECK(out.feature_alphabet.size() == 121);
  CHECK(out.occurrences[5].left == std::vector<std::string>{"l5", "r"});
  CHECK(out.occurrences[5].right.empty());
}

TEST_CASE("prune keeps the most frequent tokens") {
  std::vector<std::string> bag;
  bag.insert(bag.end(), 10, "a");
  bag.insert(bag.end(), 5, "b");
  bag.push_back("c");
  const auto out = prune_features(set_of({occ("1", bag)}), 2);
  CHECK(out.feature_alphabet == std::set<std::string>{"a", "b"});
  const auto& kept = out.occurrences[0].left;
  CHECK(std::count(kept.begin(), kept.end(), "c") == 0);
  CHECK(kept.size() == 15);
}

TEST_CASE("prune keeps occurrences it empties") {
  const auto out = prune_features(set_of({occ("1", {"a", "a"}), occ("2", {"z"})}), 1);
  REQUIRE(out.occurrences.size() == 2);
  CHECK(out.occurrences[1].context().empty());
}

TEST_CASE("prune never adds or inflates tokens") {
  Rng r(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Occurrence> v;
    for (int i = 0; i < 10; ++i) {
      std::vector<std::string> l, rr;
      for (std::size_t j = r.below(6); j > 0; --j) l.push_back("t" + std::to_string(r.below(12)));
      for (std::size_t j = r.below(6); j > 0; --j) rr.push_back("t" + std::to_string(r.below(12)));
      v.push_back(occ(std::to_string(i), l, rr));
    }
    const auto in = set_of(v);
    const auto out = prune_features(in, 1 + r.below(8));
    std::map<std::string, int> before, after;
    for (const auto& o : in.occurrences) for (const auto& t : o.context()) ++before[t];
    for (const auto& o : out.occurrences) {
      for (const auto& t : o.context()) {
        ++after[t];
        CHECK(out.feature_alphabet.count(t) == 1);
      }
    }
    for (const auto& [t, c] : after) CHECK(c <= before[t]);
  }
}

TEST_CASE("extract, sample, prune is deterministic") {
  std::vector<Sentence> corpus{toks("x a t b c"), toks("t d e"), toks("f t g h t")};
  auto run = [&] {
    std::ostringstream out;
    std::map<std::string, OccurrenceSet> m;
    for (auto& [t, s] : extract_occurrences(corpus, {"t"})) m[t] = prune_features(sample_occurrences(s, 10), 3);
    write_occurrences(out, m);
    return out.str();
  };
  CHECK(run() == run());
}

TEST_CASE("occurrence file round-trip") {
  std::map<std::string, OccurrenceSet> m;
  m["t"] = set_of({occ("id1", {"a", "b"}, {}), occ("id2", {}, {"c"})});
  m["t"].target = "t";
  for (auto& o : m["t"].occurrences) o.target = "t";
  std::stringstream io;
  write_occurrences(io, m);
  const auto back = read_occurrences(io);
  REQUIRE(back.count("t"));
  CHECK(back.at("t").occurrences == m["t"].occurrences);
}

TEST_CASE("ingest drops targets that never occur") {
  const auto m = ingest_corpus({toks("a t b")}, {"t", "missing"});
  CHECK(m.count("t") == 1);
  CHECK(m.count("missing") == 0);
}
