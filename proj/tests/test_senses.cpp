#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "lexent/common.hpp"
#include "lexent/senses.hpp"
#include "lexent/synthetic.hpp"

using namespace lexent;

namespace {

// Occurrence i carries the single token "o<i>", so a similarity over bags can
// look the pair up in a matrix.
OccurrenceSet indexed_occurrences(std::size_t n) {
  OccurrenceSet s;
  s.target = "w";
  s.merged = true;
  for (std::size_t i = 0; i < n; ++i) {
    s.occurrences.push_back(Occurrence{"w", "id" + std::to_string(1000 + i), {"o" + std::to_string(i)}, {}});
  }
  return s;
}

BagSimilarity matrix_similarity(std::function<double(std::size_t, std::size_t)> f) {
  return [f](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return f(std::stoul(a.at(0).substr(1)), std::stoul(b.at(0).substr(1)));
  };
}

std::vector<std::vector<std::size_t>> iota_clusters(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({i});
  return out;
}

}  // namespace

TEST_CASE("correlation: everything similar gives one cluster") {
  const auto occs = indexed_occurrences(12);
  const auto cs = correlation_cluster(occs, {}, matrix_similarity([](auto, auto) { return 0.95; }));
  REQUIRE(cs.clusters.size() == 1);
  CHECK(cs.clusters[0].size() == 12);
}

TEST_CASE("correlation: ten dissimilar occurrences stay singletons") {
  const auto occs = indexed_occurrences(10);
  const auto cs = correlation_cluster(occs, {}, matrix_similarity([](auto, auto) { return 0.1; }));
  CHECK(cs.clusters == iota_clusters(10));
}

TEST_CASE("correlation: planted groups") {
  const auto occs = indexed_occurrences(40);
  auto sim = matrix_similarity([](std::size_t a, std::size_t b) { return (a % 2) == (b % 2) ? 0.9 : 0.1; });
  const auto cs = correlation_cluster(occs, {}, sim);
  REQUIRE(cs.clusters.size() == 2);
  std::vector<int> planted;
  for (std::size_t i = 0; i < 40; ++i) planted.push_back(static_cast<int>(i % 2));
  CHECK(synth::rand_index(cs.labels(), planted) == 1.0);
}

TEST_CASE("correlation: early termination after a stall") {
  // Two groups of 20, then 60 isolated points. Size >= 2.5 counts as big.
  const auto occs = indexed_occurrences(100);
  auto sim = matrix_similarity([](std::size_t a, std::size_t b) {
    if (a < 20 && b < 20) return 0.9;
    if (a >= 20 && a < 40 && b >= 20 && b < 40) return 0.9;
    return 0.0;
  });
  // Pivots 0 and 20 make the big clusters; the next five singletons stall.
  const auto cs = correlation_cluster(occs, {}, sim);
  REQUIRE(cs.clusters.size() == 7);
  CHECK(cs.clusters[0].size() == 20);
  CHECK(cs.clusters[1].size() == 20);
  for (std::size_t c = 2; c < 7; ++c) CHECK(cs.clusters[c] == std::vector<std::size_t>{38 + c});
  CHECK(cs.total_mass == 45.0);
}

TEST_CASE("correlation: members may be shared but pivots are not reused") {
  const auto occs = indexed_occurrences(30);
  Rng r(4);
  std::vector<double> m(30 * 30);
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m[i * 30 + j] = m[j * 30 + i] = r.uniform();
  }
  CorrelationConfig cfg;
  cfg.sigma = 0.7;
  cfg.min_cluster_frac = 0.5;  // no cluster is big, so termination cannot fire
  const auto cs = correlation_cluster(occs, cfg, matrix_similarity([&](auto a, auto b) { return m[a * 30 + b]; }));
  std::set<std::size_t> covered;
  for (const auto& c : cs.clusters) covered.insert(c.begin(), c.end());
  CHECK(covered.size() == 30);
  // Lowest-index pivot rule: each cluster's pivot is the smallest index not
  // covered by earlier clusters.
  std::set<std::size_t> seen;
  for (const auto& c : cs.clusters) {
    std::size_t pivot = 0;
    while (seen.count(pivot)) ++pivot;
    CHECK(std::find(c.begin(), c.end(), pivot) != c.end());
    for (std::size_t j : c) {
      if (j != pivot) CHECK(m[pivot * 30 + j] > cfg.sigma);
    }
    seen.insert(c.begin(), c.end());
  }
}

TEST_CASE("correlation: parallel equals serial and reruns agree") {
  const auto occs = indexed_occurrences(60);
  auto sim = matrix_similarity([](std::size_t a, std::size_t b) {
    return static_cast<double>((a * 7 + b * 7) % 10) / 10.0 + ((a % 3) == (b % 3) ? 0.05 : 0.0);
  });
  CorrelationConfig cfg;
  const auto a = correlation_cluster(occs, cfg, sim);
  CHECK(a.clusters == correlation_cluster_serial(occs, cfg, sim).clusters);
  CHECK(a.clusters == correlation_cluster(occs, cfg, sim).clusters);
  cfg.random_pivot = true;
  cfg.seed = 9;
  CHECK(correlation_cluster(occs, cfg, sim).clusters == correlation_cluster_serial(occs, cfg, sim).clusters);
}

TEST_CASE("correlation config is validated") {
  CorrelationConfig cfg;
  cfg.sigma = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("tiered: a single occurrence forms one cluster") {
  OccurrenceSet s;
  s.target = "w";
  s.merged = true;
  s.occurrences.push_back(Occurrence{"w", "id", {"a", "b", "c"}, {}});
  TieredConfig cfg;
  cfg.iterations = 50;
  const auto cs = tiered_cluster(s, cfg);
  CHECK(cs.clusters == std::vector<std::vector<std::size_t>>{{0}});
}

TEST_CASE("tiered: no tokens is an error") {
  OccurrenceSet s;
  s.target = "w";
  s.occurrences.push_back(Occurrence{"w", "id", {}, {}});
  CHECK_THROWS_WITH_AS(tiered_cluster(s, TieredConfig{}), doctest::Contains("no tokens to cluster"), Error);
}

TEST_CASE("tiered: partition, determinism, best state") {
  synth::PlantedTopicsSpec spec;
  spec.occurrences = 40;
  const auto planted = synth::planted_topics(spec);
  TieredConfig cfg;
  cfg.iterations = 200;
  cfg.seed = 3;
  const auto a = tiered_cluster(planted.occurrences, cfg);
  const auto b = tiered_cluster(planted.occurrences, cfg);

  std::ostringstream sa, sb;
  write_cluster_sets(sa, {a});
  write_cluster_sets(sb, {b});
  CHECK(sa.str() == sb.str());
  CHECK(a.log_joint_trace == b.log_joint_trace);

  std::vector<int> seen(40, 0);
  for (const auto& c : a.clusters) {
    CHECK_FALSE(c.empty());
    for (std::size_t i : c) ++seen[i];
  }
  for (int s : seen) CHECK(s == 1);
  CHECK(a.total_mass == 40.0);

  REQUIRE(a.log_joint);
  REQUIRE(a.log_joint_trace.size() == cfg.iterations + 1);  // initial state + one per sweep
  for (double lj : a.log_joint_trace) CHECK(*a.log_joint >= lj);

  // The reported value is the joint of the reported state.
  std::vector<int> cluster_of(40);
  for (std::size_t c = 0; c < a.clusters.size(); ++c) {
    for (std::size_t i : a.clusters[c]) cluster_of[i] = static_cast<int>(c);
  }
  CHECK(tiered_log_joint(planted.occurrences, cfg, cluster_of, *a.root_tokens) ==
        doctest::Approx(*a.log_joint).epsilon(1e-9));
}

TEST_CASE("tiered: the joint is invariant to cluster relabelling") {
  synth::PlantedTopicsSpec spec;
  spec.occurrences = 10;
  const auto planted = synth::planted_topics(spec);
  TieredConfig cfg;
  std::vector<std::vector<bool>> root(10, std::vector<bool>(10, false));
  root[0][0] = root[3][2] = true;
  std::vector<int> labels{0, 1, 0, 1, 2, 2, 0, 1, 0, 2};
  std::vector<int> swapped;
  for (int l : labels) swapped.push_back(l == 0 ? 2 : (l == 2 ? 0 : 1));
  CHECK(tiered_log_joint(planted.occurrences, cfg, labels, root) ==
        doctest::Approx(tiered_log_joint(planted.occurrences, cfg, swapped, root)).epsilon(1e-12));
}

TEST_CASE("tiered config is validated") {
  TieredConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("filter_clusters examples") {
  ClusterSet cs;
  cs.target = "w";
  for (std::size_t i = 0; i < 1000; ++i) cs.source_ids.push_back(std::to_string(i));
  std::vector<std::size_t> a(600), b(300), c(20);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 600);
  std::iota(c.begin(), c.end(), 900);
  cs.clusters = {a, b, c};
  cs.total_mass = 920;

  const auto kept = filter_clusters(cs, 0.025);
  CHECK(kept.clusters == std::vector<std::vector<std::size_t>>{a, b});

  cs.clusters = {a, b};
  CHECK(filter_clusters(cs, 0.025).clusters == cs.clusters);

  cs.clusters = {c, {950}, {960}};
  const auto fallback = filter_clusters(cs, 0.025);
  REQUIRE(fallback.clusters.size() == 1);
  CHECK(fallback.clusters[0].size() == 1000);
  CHECK(fallback.total_mass == 1000.0);
}

TEST_CASE("filter_clusters never grows and keeps mass at most one") {
  Rng r(6);
  for (int trial = 0; trial < 100; ++trial) {
    ClusterSet cs;
    const std::size_t n = 1 + r.below(200);
    for (std::size_t i = 0; i < n; ++i) cs.source_ids.push_back(std::to_string(i));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    r.shuffle(perm);
    for (std::size_t i = 0; i < n;) {
      const std::size_t len = 1 + r.below(n - i);
      cs.clusters.emplace_back(perm.begin() + i, perm.begin() + i + len);
      i += len;
    }
    cs.total_mass = static_cast<double>(n);
    const auto out = filter_clusters(cs, 0.025 + r.uniform() * 0.3);
    CHECK(out.clusters.size() <= cs.clusters.size());
    double mass = 0;
    for (const auto& c : out.clusters) mass += static_cast<double>(c.size()) / out.total_mass;
    CHECK(mass <= 1.0 + 1e-12);
  }
}

TEST_CASE("build_prototypes examples") {
  ClusterSet cs;
  cs.target = "w";
  cs.source_ids = {"x", "y"};
  cs.clusters = {{0, 1}};
  cs.total_mass = 2;
  const std::map<std::string, SparseVector> full{{"x", SparseVector{{"a", 1}, {"b", 1}}},
                                                 {"y", SparseVector{{"a", 2}}}};
  const auto senses = build_prototypes(cs, full);
  REQUIRE(senses.size() == 1);
  CHECK(senses[0].prototype == SparseVector{{"a", 3}, {"b", 1}});
  CHECK(senses[0].prior == 1.0);

  cs.source_ids = {"x", "y", "z"};
  CHECK_THROWS_AS(build_prototypes(ClusterSet{"w", {"x", "q"}, {{0, 1}}, 2.0, {}, {}, {}}, full), Error);

  ClusterSet sized;
  sized.target = "w";
  std::map<std::string, SparseVector> many;
  for (std::size_t i = 0; i < 1000; ++i) {
    sized.source_ids.push_back(std::to_string(i));
    many[std::to_string(i)] = SparseVector{{"f", 1}};
  }
  std::vector<std::size_t> big(750), small(250);
  std::iota(big.begin(), big.end(), 0);
  std::iota(small.begin(), small.end(), 750);
  sized.clusters = {big, small};
  sized.total_mass = 1000;
  const auto two = build_prototypes(sized, many);
  CHECK(two[0].prior == 0.75);
  CHECK(two[1].prior == 0.25);
}

TEST_CASE("one cluster reproduces the baseline prototype") {
  OccurrenceSet s;
  s.target = "w";
  for (int i = 0; i < 5; ++i) s.occurrences.push_back(Occurrence{"w", "id" + std::to_string(i), {"a", "x" + std::to_string(i % 2)}, {"b"}});
  const auto full = context_vectors(s);
  const auto senses = build_prototypes(single_cluster(s), full);
  SparseVector baseline;
  for (const auto& o : s.occurrences) for (const auto& t : o.context()) baseline.add(t, 1.0);
  CHECK(senses.at(0).prototype == baseline);
  CHECK(senses.at(0).prior == 1.0);
}

TEST_CASE("sense labels") {
  CHECK(sense_label("dog", 2) == "dog#2");
  CHECK(parse_sense_label("c#sharp#1") == std::pair<std::string, std::size_t>{"c#sharp", 1});
  CHECK_THROWS_AS(parse_sense_label("plain"), Error);
}

TEST_CASE("cluster and inventory files round-trip") {
  const auto occs = indexed_occurrences(6);
  ClusterSet cs;
  cs.target = "w";
  for (const auto& o : occs.occurrences) cs.source_ids.push_back(o.source_id);
  cs.clusters = {{0, 2, 4}, {1, 3}, {5}};
  cs.total_mass = 6;
  cs.log_joint = -12.5;
  std::stringstream io;
  write_cluster_sets(io, {cs});
  const auto back = read_cluster_sets(io, {{"w", occs}});
  REQUIRE(back.size() == 1);
  CHECK(back[0].clusters == cs.clusters);
  CHECK(back[0].log_joint == cs.log_joint);
  CHECK(back[0].total_mass == 6.0);

  SenseInventory inv;
  inv["dog"] = {Sense{SparseVector{{"bark", 3}, {"tail", 1}}, 0.75}, Sense{SparseVector{{"hot", 2}}, 0.25}};
  inv["animal"] = {Sense{SparseVector{{"tail", 5}}, 1.0}};
  std::stringstream m, p;
  write_inventory(m, p, inv);
  const auto inv2 = read_inventory(m, p);
  REQUIRE(inv2.size() == 2);
  CHECK(inv2.at("dog")[0].prototype == inv.at("dog")[0].prototype);
  CHECK(inv2.at("dog")[1].prior == 0.25);
  CHECK(inv2.at("animal")[0].prototype == inv.at("animal")[0].prototype);
}
