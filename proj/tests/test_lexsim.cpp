#include <doctest.h>

#include <set>
#include <sstream>

#include "lexent/common.hpp"
#include "lexent/lexsim.hpp"
#include "oracles.hpp"

using namespace lexent;

namespace {

Taxonomy parse(const std::string& text) {
  std::istringstream in(text);
  return Taxonomy::parse(in);
}

const char* kAnimals =
    "entity\t-\tentity\n"
    "animal\tentity\tanimal\n"
    "dog\tanimal\tdog,hound\n"
    "cat\tanimal\tcat\n";

struct RandomDag {
  std::string text;
  std::multimap<std::string, std::string> parent_of;
  std::map<std::string, std::vector<std::string>> senses;  // word -> synsets
};

RandomDag random_dag(Rng& r, std::size_t n, std::size_t n_words) {
  RandomDag d;
  std::ostringstream out;
  out << "s0\t-\t\n";
  for (std::size_t i = 1; i < n; ++i) {
    const std::string id = "s" + std::to_string(i);
    std::set<std::size_t> parents{r.below(i)};
    if (r.below(3) == 0) parents.insert(r.below(i));
    for (std::size_t p : parents) {
      out << id << "\ts" << p << "\t\n";
      d.parent_of.emplace(id, "s" + std::to_string(p));
    }
  }
  for (std::size_t w = 0; w < n_words; ++w) {
    const std::string word = "w" + std::to_string(w);
    std::set<std::size_t> syn{r.below(n)};
    if (r.below(3) == 0) syn.insert(r.below(n));
    for (std::size_t s : syn) {
      const std::string leaf = "l" + word + "_" + std::to_string(s);
      out << leaf << "\ts" << s << '\t' << word << '\n';
      d.parent_of.emplace(leaf, "s" + std::to_string(s));
      d.senses[word].push_back(leaf);
    }
  }
  d.text = out.str();
  return d;
}

}  // namespace

TEST_CASE("two-node taxonomy depths") {
  const auto t = parse("root\t-\t\nchild\troot\tkid\n");
  CHECK(t.depth("root") == 1);
  CHECK(t.depth("child") == 2);
}

TEST_CASE("diamond takes the shortest route") {
  const auto t = parse(
      "r\t-\t\n"
      "a\tr\t\n"
      "b\ta\t\n"
      "c\tb\t\n"
      "c\tr\t\n"
      "d\tc\tx\n");
  CHECK(t.depth("c") == 2);
  CHECK(t.depth("d") == 3);
}

TEST_CASE("taxonomy validation") {
  CHECK_THROWS_AS(parse("r\t-\t\na\tghost\t\n"), Error);
  CHECK_THROWS_WITH_AS(parse("r\t-\t\na\tb\t\nb\ta\t\n"), doctest::Contains("cyclic taxonomy"), Error);
  CHECK_THROWS_AS(parse("r\t-\t\nq\t-\t\n"), Error);
  CHECK_THROWS_AS(parse("r\tx\ty\tz\n"), Error);
}

TEST_CASE("depths match a breadth-first oracle") {
  Rng r(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + r.below(25);
    RandomDag d = random_dag(r, n, r.below(6));
    const auto t = parse(d.text);
    const auto expected = oracle::depths(d.parent_of, "s0");
    for (const auto& [s, depth] : expected) CHECK(t.depth(s) == depth);
  }
}

TEST_CASE("wu-palmer examples") {
  const auto t = parse(kAnimals);
  CHECK(wu_palmer("dog", "dog", t).value == 1.0);
  CHECK(wu_palmer("dog", "hound", t).value == 1.0);
  CHECK(wu_palmer("dog", "cat", t).value == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const auto oov = wu_palmer("dog", "unicorn", t);
  CHECK(oov.value == 0.0);
  CHECK(oov.out_of_vocabulary);
}

TEST_CASE("wu-palmer is symmetric, bounded, and 1 only on shared synsets") {
  Rng r(55);
  for (int trial = 0; trial < 30; ++trial) {
    std::ostringstream out;
    const std::size_t n = 2 + r.below(15);
    out << "s0\t-\t\n";
    std::map<std::string, std::vector<std::string>> senses;
    for (std::size_t i = 1; i < n; ++i) {
      out << "s" << i << "\ts" << r.below(i) << "\t";
      const std::string word = "w" + std::to_string(r.below(8));
      out << word << '\n';
      senses[word].push_back("s" + std::to_string(i));
    }
    const auto t = parse(out.str());
    for (const auto& [a, sa] : senses) {
      for (const auto& [b, sb] : senses) {
        const double x = wu_palmer(a, b, t).value;
        CHECK(x == wu_palmer(b, a, t).value);
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        bool shared = false;
        for (const auto& s : sa) shared |= std::find(sb.begin(), sb.end(), s) != sb.end();
        CHECK((x == 1.0) == shared);
      }
    }
  }
}

TEST_CASE("llm examples") {
  const auto t = parse(kAnimals);
  const std::vector<std::string> s{"dog", "cat", "animal"};
  CHECK(llm_similarity(s, s, t) == 1.0);
  CHECK(llm_similarity(s, {}, t) == 0.0);
  CHECK(llm_similarity({}, {}, t) == 0.0);

  const WordSimilarity fixed = [](const std::string& u, const std::string& v) {
    static const std::map<std::pair<std::string, std::string>, double> table{
        {{"a", "x"}, 0.8}, {{"b", "x"}, 0.3}, {{"a", "y"}, 0.1}, {{"b", "y"}, 0.4}, {{"c", "x"}, 0.0}, {{"c", "y"}, 0.2}};
    auto it = table.find({u, v});
    return it == table.end() ? 0.0 : it->second;
  };
  CHECK(llm_similarity({"a", "b", "c"}, {"x", "y"}, fixed) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("llm matches the double loop exactly") {
  Rng r(303);
  RandomDag d = random_dag(r, 30, 20);
  const auto t = parse(d.text);
  const auto table = build_similarity_table(t.words(), wu_palmer_metric(t));
  auto sim = [&](const std::string& a, const std::string& b) { return wu_palmer(a, b, t).value; };
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> s1, s2;
    for (std::size_t i = r.below(11); i > 0; --i) s1.push_back("w" + std::to_string(r.below(20)));
    for (std::size_t i = r.below(11); i > 0; --i) s2.push_back("w" + std::to_string(r.below(20)));
    const double expected = oracle::llm(s1, s2, sim);
    CHECK(llm_similarity(s1, s2, t) == expected);
    std::vector<std::uint32_t> i1, i2;
    for (const auto& w : s1) i1.push_back(static_cast<std::uint32_t>(table.index(w)));
    for (const auto& w : s2) i2.push_back(static_cast<std::uint32_t>(table.index(w)));
    CHECK(llm_similarity(std::span<const std::uint32_t>(i1), std::span<const std::uint32_t>(i2), table) ==
          expected);
  }
}

TEST_CASE("llm stays in [0,1] and is 1 on itself") {
  Rng r(8);
  RandomDag d = random_dag(r, 20, 15);
  const auto t = parse(d.text);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> s1, s2;
    for (std::size_t i = 1 + r.below(10); i > 0; --i) s1.push_back("w" + std::to_string(r.below(15)));
    for (std::size_t i = 1 + r.below(10); i > 0; --i) s2.push_back("w" + std::to_string(r.below(15)));
    const double x = llm_similarity(s1, s2, t);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
    CHECK(llm_similarity(s1, s1, t) == 1.0);
  }
}

TEST_CASE("parallel and serial similarity tables agree") {
  Rng r(12);
  RandomDag d = random_dag(r, 40, 60);
  const auto t = parse(d.text);
  CHECK(build_similarity_table(t.words(), wu_palmer_metric(t)) ==
        build_similarity_table_serial(t.words(), wu_palmer_metric(t)));
}
