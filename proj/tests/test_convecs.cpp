#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "lexent/common.hpp"
#include "lexent/convecs.hpp"

using namespace lexent;

namespace {

// 1-d word vectors, so each example is a point (u, v) in the plane.
// Entails when u is well above v.
std::vector<PairExample> toy_set(Rng& r, std::size_t n) {
  std::vector<PairExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    const double small = 0.1 + 0.4 * r.uniform();
    out.push_back(pos ? PairExample{{1.0}, {small}, true} : PairExample{{small}, {1.0}, false});
  }
  return out;
}

std::vector<PairExample> flipped(std::vector<PairExample> xs) {
  for (auto& e : xs) e.entails = !e.entails;
  return xs;
}

std::vector<Dense> probe_grid() {
  std::vector<Dense> grid;
  for (double u = -1.0; u <= 1.0; u += 0.25) {
    for (double v = -1.0; v <= 1.0; v += 0.25) grid.push_back({u, v});
  }
  return grid;
}

}  // namespace

TEST_CASE("single sense: both training strategies take that pair") {
  PreparedVector pu = prepare(SparseVector{{"a", 1}}, 1.0, 100), pv = prepare(SparseVector{{"b", 1}}, 1.0, 100);
  const LatentSenseList u{{{1.0, 2.0}, 1.0, &pu}}, v{{{3.0, 4.0}, 1.0, &pv}};
  for (auto s : {TrainPairStrategy::BestOverlap, TrainPairStrategy::AvgVector}) {
    const auto e = select_training_pair(true, u, v, {s, false});
    CHECK(e.u_latent == u[0].latent);
    CHECK(e.v_latent == v[0].latent);
    CHECK(e.entails);
  }
}

TEST_CASE("BestOverlap picks the most-overlapping sense pair") {
  // u1 is included in v2 only; the other pairs overlap less.
  const PreparedVector u1 = prepare(SparseVector{{"a", 2}, {"b", 1}}, 0.5, 100);
  const PreparedVector u2 = prepare(SparseVector{{"x", 1}, {"a", 1}}, 0.5, 100);
  const PreparedVector v1 = prepare(SparseVector{{"y", 3}, {"x", 1}}, 0.5, 100);
  const PreparedVector v2 = prepare(SparseVector{{"a", 3}, {"b", 2}, {"c", 1}}, 0.5, 100);
  const LatentSenseList u{{{1.0}, 0.5, &u1}, {{2.0}, 0.5, &u2}};
  const LatentSenseList v{{{3.0}, 0.5, &v1}, {{4.0}, 0.5, &v2}};
  const double m[2][2] = {{balapinc(u1, v1), balapinc(u1, v2)}, {balapinc(u2, v1), balapinc(u2, v2)}};
  REQUIRE(m[0][1] > m[0][0]);
  REQUIRE(m[0][1] > m[1][0]);
  REQUIRE(m[0][1] > m[1][1]);

  for (bool label : {true, false}) {
    const auto e = select_training_pair(label, u, v, {TrainPairStrategy::BestOverlap, false});
    CHECK(e.u_latent == Dense{1.0});
    CHECK(e.v_latent == Dense{4.0});
  }
  // The opt-in alternative for negatives.
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      if (m[i][j] < m[bi][bj]) bi = i, bj = j;
    }
  }
  const auto neg = select_training_pair(false, u, v, {TrainPairStrategy::BestOverlap, true});
  CHECK(neg.u_latent == u[bi].latent);
  CHECK(neg.v_latent == v[bj].latent);
  const auto pos = select_training_pair(true, u, v, {TrainPairStrategy::BestOverlap, true});
  CHECK(pos.v_latent == Dense{4.0});
}

TEST_CASE("AvgVector uses the prior-weighted mean") {
  const LatentSenseList u{{{4.0, 0.0}, 0.75, nullptr}, {{0.0, 8.0}, 0.25, nullptr}};
  const LatentSenseList v{{{1.0, 1.0}, 1.0, nullptr}};
  const auto e = select_training_pair(false, u, v, {TrainPairStrategy::AvgVector, false});
  CHECK(e.u_latent == Dense{3.0, 2.0});
  CHECK(e.v_latent == Dense{1.0, 1.0});
}

TEST_CASE("training-pair selection errors") {
  const LatentSenseList one{{{1.0}, 1.0, nullptr}};
  CHECK_THROWS_AS(select_training_pair(true, {}, one, {}), Error);
  CHECK_THROWS_AS(select_training_pair(true, one, one, {TrainPairStrategy::BestOverlap, false}), Error);
}

TEST_CASE("toy set: separable, calibrated, asymmetric") {
  Rng r(1);
  const auto train = toy_set(r, 40);
  const auto model = train_convecs(train, 2, 1.0, 7);
  std::size_t correct = 0;
  for (const auto& e : train) correct += (score_pair(model, e.u_latent, e.v_latent) >= 0.5) == e.entails;
  CHECK(correct == train.size());

  CHECK(score_pair(model, {1.0}, {0.3}) > 0.5);
  CHECK(score_pair(model, {1.0}, {0.3}) != score_pair(model, {0.3}, {1.0}));
  for (const auto& x : probe_grid()) {
    const double p = score_pair(model, {x[0]}, {x[1]});
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("flipping labels complements the probabilities") {
  Rng r(2);
  const auto train = toy_set(r, 40);
  const auto a = train_convecs(train, 2, 1.0, 7);
  const auto b = train_convecs(flipped(train), 2, 1.0, 7);
  for (const auto& x : probe_grid()) {
    CHECK(std::abs(score_pair(a, {x[0]}, {x[1]}) + score_pair(b, {x[0]}, {x[1]}) - 1.0) <= 0.05);
  }
}

TEST_CASE("duplicating the training set keeps the decision function") {
  Rng r(3);
  auto train = toy_set(r, 30);
  // Overlapping classes, so some multipliers sit at the bound.
  train.push_back(PairExample{{1.0}, {0.2}, false});
  train.push_back(PairExample{{0.2}, {1.0}, true});
  const auto a = train_convecs(train, 2, 1.0, 7);
  auto twice = train;
  twice.insert(twice.end(), train.begin(), train.end());
  const auto b = train_convecs(twice, 2, 1.0, 7);
  for (const auto& x : probe_grid()) {
    CHECK(std::abs(a.decision({x[0]}, {x[1]}) - b.decision({x[0]}, {x[1]})) <= 1e-6);
  }
}

TEST_CASE("training is deterministic given the seed") {
  Rng r(4);
  const auto train = toy_set(r, 30);
  std::ostringstream a, b;
  write_model(a, train_convecs(train, 2, 1.0, 11));
  write_model(b, train_convecs(train, 2, 1.0, 11));
  CHECK(a.str() == b.str());
}

TEST_CASE("contract errors") {
  Rng r(5);
  auto train = toy_set(r, 10);
  for (auto& e : train) e.entails = true;
  CHECK_THROWS_WITH_AS(train_convecs(train, 2, 1.0, 1), doctest::Contains("degenerate training set"), Error);
  const auto model = train_convecs(toy_set(r, 10), 2, 1.0, 1);
  CHECK_THROWS_WITH_AS(score_pair(model, {1.0, 2.0}, {1.0}), doctest::Contains("dimension mismatch"), Error);
  CHECK_THROWS_AS(eval_pair(model, {}, {{{1.0}, 1.0, nullptr}}, EvalStrategy::AvgScore), Error);
}

TEST_CASE("evaluation strategies") {
  Rng r(6);
  const auto model = train_convecs(toy_set(r, 30), 2, 1.0, 1);
  const LatentSenseList one_u{{{0.9}, 1.0, nullptr}}, one_v{{{0.2}, 1.0, nullptr}};
  const double base = score_pair(model, {0.9}, {0.2});
  for (auto s : {EvalStrategy::AvgScore, EvalStrategy::MaxScore, EvalStrategy::AvgVector}) {
    CHECK(eval_pair(model, one_u, one_v, s) == base);
  }

  const LatentSenseList u{{{0.9}, 0.5, nullptr}, {{-0.4}, 0.5, nullptr}};
  const LatentSenseList v{{{0.2}, 0.5, nullptr}, {{0.7}, 0.5, nullptr}};
  double sum = 0.0, best = 0.0;
  for (const auto& su : u) {
    for (const auto& sv : v) {
      const double p = score_pair(model, su.latent, sv.latent);
      sum += p;
      best = std::max(best, p);
    }
  }
  CHECK(eval_pair(model, u, v, EvalStrategy::AvgScore) == doctest::Approx(sum / 4.0).epsilon(1e-15));
  CHECK(eval_pair(model, u, v, EvalStrategy::MaxScore) == best);
  CHECK(eval_pair(model, u, v, EvalStrategy::MaxScore) >= eval_pair(model, u, v, EvalStrategy::AvgScore));

  const LatentSenseList same{{{0.5}, 0.5, nullptr}, {{0.5}, 0.5, nullptr}};
  CHECK(eval_pair(model, same, one_v, EvalStrategy::AvgVector) == score_pair(model, {0.5}, {0.2}));
}

TEST_CASE("kernel matrices are symmetric PSD; parallel equals serial") {
  Rng r(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + r.below(30), d = 1 + r.below(8);
    std::vector<Dense> xs;
    for (std::size_t i = 0; i < n; ++i) {
      Dense x(d);
      for (double& v : x) v = r.normal();
      xs.push_back(normalized(x));
    }
    const auto k = gram_matrix(xs, 2);
    CHECK(k == gram_matrix_serial(xs, 2));
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = k[i * n + j];
    }
    CHECK((m - m.transpose()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("model file round-trip") {
  Rng r(8);
  auto model = train_convecs(toy_set(r, 30), 2, 1.0, 3);
  model.projection = "svd:0123456789abcdef";
  std::stringstream io;
  write_model(io, model);
  const auto back = read_model(io);
  CHECK(back.latent_dim == model.latent_dim);
  CHECK(back.kernel_degree() == 2);
  CHECK(back.projection == model.projection);
  for (const auto& x : probe_grid()) {
    CHECK(score_pair(back, {x[0]}, {x[1]}) == score_pair(model, {x[0]}, {x[1]}));
  }

  std::istringstream bad("convecs-model 9\n");
  CHECK_THROWS_AS(read_model(bad), Error);
}

TEST_CASE("latent fingerprints track the basis") {
  LatentMatrix a;
  a.columns = {"x", "y"};
  a.singular_values = {2.0};
  a.basis = {0.6, 0.8};
  LatentMatrix b = a;
  CHECK(latent_fingerprint(a) == latent_fingerprint(b));
  b.basis[1] = 0.80000001;
  CHECK(latent_fingerprint(a) != latent_fingerprint(b));
}

TEST_CASE("strategy names") {
  CHECK(parse_eval_strategy("AvgVector") == EvalStrategy::AvgVector);
  CHECK(parse_train_pair_strategy(to_string(TrainPairStrategy::BestOverlap)) == TrainPairStrategy::BestOverlap);
  CHECK_THROWS_AS(parse_eval_strategy("WeightedAvgScore"), Error);
}
