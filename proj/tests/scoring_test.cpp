#include "bnsl/scoring.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <thread>

#include "bnsl/errors.hpp"
#include "bnsl/net_io.hpp"
#include "bnsl/neighbourhood.hpp"
#include "test_support.hpp"

namespace bnsl {
namespace {

using testing::integer_dataset;

NodeSet set_of(std::initializer_list<int> xs) {
  NodeSet s;
  for (int x : xs) s.insert(x);
  return s;
}

TEST(FamilyCounts, Examples) {
  const Dataset d = integer_dataset({2, 2}, {{0, 0}, {0, 1}, {1, 1}});
  const FamilyStats s = family_counts(d, 1, set_of({0}));
  EXPECT_EQ(s.config_count, 2U);
  EXPECT_EQ(s.count(0, 0), 1U);
  EXPECT_EQ(s.count(0, 1), 1U);
  EXPECT_EQ(s.count(1, 0), 0U);
  EXPECT_EQ(s.count(1, 1), 1U);

  const FamilyStats marginal = family_counts(d, 1, {});
  EXPECT_EQ(marginal.count(0, 0), 1U);
  EXPECT_EQ(marginal.count(0, 1), 2U);

  const FamilyStats empty = family_counts(integer_dataset({2, 3}, {}), 0, set_of({1}));
  EXPECT_EQ(empty.total(), 0U);
  EXPECT_EQ(empty.counts.size(), 6U);

  EXPECT_THROW(family_counts(d, 0, set_of({0})), IndexError);
  EXPECT_THROW(family_counts(d, 2, {}), IndexError);
}

TEST(FamilyCounts, LastParentRunsFastest) {
  const Dataset d = integer_dataset({2, 3, 2}, {{1, 2, 0}, {0, 1, 1}});
  const FamilyStats s = family_counts(d, 2, set_of({0, 1}));
  EXPECT_EQ(s.config_count, 6U);
  EXPECT_EQ(s.count(1 * 3 + 2, 0), 1U);
  EXPECT_EQ(s.count(0 * 3 + 1, 1), 1U);
  EXPECT_EQ(s.total(), 2U);
}

TEST(LocalBdeu, Examples) {
  const Dataset two = integer_dataset({2}, {{0}, {1}});
  EXPECT_NEAR(local_bdeu(family_counts(two, 0, {})), std::log(1.0 / 8.0), 1e-12);
  EXPECT_NEAR(local_bdeu(family_counts(two, 0, {})), -2.079442, 1e-6);
  const Dataset one = integer_dataset({2}, {{0}});
  EXPECT_NEAR(local_bdeu(family_counts(one, 0, {})), std::log(0.5), 1e-12);
  EXPECT_EQ(local_bdeu(family_counts(integer_dataset({3, 2}, {}), 0, set_of({1}))), 0.0);
}

TEST(LocalBdeu, MatchesPolyaUrnOracle) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const std::vector<int> arities = {2, 3, 2, 4};
    const Dataset d = testing::random_dataset(arities, 1 + static_cast<int>(uniform_index(rng, 120)), rng);
    const int child = static_cast<int>(uniform_index(rng, 4));
    NodeSet parents;
    std::vector<int> parent_list;
    for (int v = 0; v < 4; ++v) {
      if (v != child && uniform01(rng) < 0.5) {
        parents.insert(v);
        parent_list.push_back(v);
      }
    }
    const double ess = i % 2 == 0 ? 1.0 : 3.5;
    const double oracle = testing::polya_family_log_likelihood(d, child, parent_list, ess);
    ASSERT_NEAR(local_bdeu(family_counts(d, child, parents), ess), oracle, 1e-9 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(Score, EquivalentTwoNodeGraphsAgree) {
  Rng rng(2);
  const Dataset d = testing::random_dataset({2, 3}, 50, rng);
  EXPECT_NEAR(score(Dag::from_arcs(2, {{0, 1}}), d), score(Dag::from_arcs(2, {{1, 0}}), d), 1e-10);
}

TEST(Score, EmptyDatasetScoresZero) {
  const Dataset d = integer_dataset({2, 2, 2}, {});
  EXPECT_EQ(score(testing::complete3(), d), 0.0);
}

TEST(Score, DecomposesOverFamilies) {
  Rng rng(3);
  const Dataset d = testing::random_dataset({2, 2, 3}, 80, rng);
  const double expected = family_score(d, 0, {}) + family_score(d, 1, set_of({0})) + family_score(d, 2, set_of({1}));
  EXPECT_DOUBLE_EQ(score(testing::chain3(), d), expected);
}

TEST(Score, DimensionMismatch) {
  const Dataset d = integer_dataset({2, 2}, {{0, 1}});
  EXPECT_THROW(score(Dag(3), d), DimensionMismatch);
}

TEST(Score, EquivalentDagsScoreEqually) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 7));
    std::vector<int> arities(n);
    for (int& a : arities) a = 2 + static_cast<int>(uniform_index(rng, 3));
    const Dataset d = testing::random_dataset(arities, 1 + static_cast<int>(uniform_index(rng, 500)), rng);
    const Dag g = testing::random_dag(n, 0.5, rng);
    const Dag h = rcar(g, {20, 0}, rng);
    const double a = score(g, d);
    const double b = score(h, d);
    ASSERT_NEAR(a, b, 1e-9 * std::abs(a));
  }
}

TEST(Score, CacheIsTransparent) {
  Rng rng(5);
  const Dataset d = testing::random_dataset({2, 3, 2, 2, 4, 2}, 300, rng);
  ScoreCache cache;
  for (int i = 0; i < 300; ++i) {
    const Dag g = testing::random_dag(6, 0.4, rng);
    const double cached = score(g, d, cache);
    const double again = score(g, d, cache);
    const double fresh = score(g, d);
    ASSERT_EQ(cached, fresh);
    ASSERT_EQ(again, fresh);
  }
  EXPECT_GT(cache.size(), 0U);
}

// The sparse path sorts observed cells; it must agree bit for bit with the
// dense table.
TEST(Score, SparseAndDenseCountingAgree) {
  Rng rng(6);
  std::vector<int> arities(12, 4);
  const Dataset d = testing::random_dataset(arities, 60, rng);
  NodeSet many;
  for (int v = 1; v < 12; ++v) many.insert(v);
  const double sparse = family_score(d, 0, many);
  EXPECT_EQ(sparse, local_bdeu(family_counts(d, 0, many)));
  std::vector<int> parents;
  for (int v = 1; v < 12; ++v) parents.push_back(v);
  const double oracle = testing::polya_family_log_likelihood(d, 0, parents, 1.0);
  EXPECT_NEAR(sparse, oracle, 1e-9 * std::abs(oracle));
}

TEST(Score, StrongChainBeatsEmptyGraph) {
  BayesNet net;
  net.structure = Dag::from_arcs(3, {{0, 1}, {1, 2}});
  net.structure.set_labels({"a", "b", "c"});
  net.states = {{"0", "1"}, {"0", "1"}, {"0", "1"}};
  net.cpts = {{{0.5, 0.5}}, {{0.9, 0.1}, {0.1, 0.9}}, {{0.9, 0.1}, {0.1, 0.9}}};
  Rng rng(7);
  const Dataset d = forward_sample(net, 5000, rng);
  EXPECT_GT(score(net.structure, d), score(Dag(3), d));
}

TEST(ScoreDelta, MatchesFullRescore) {
  Rng rng(8);
  const Dataset d = testing::random_dataset({2, 3, 2, 2, 3, 2, 2}, 200, rng);
  ScoreCache cache;
  for (int i = 0; i < 10000; ++i) {
    const Dag g = testing::random_dag(7, 0.35, rng);
    const std::vector<Move> moves = local_moves(g, NeighbourhoodTag::ar);
    const Move m = moves[uniform_index(rng, moves.size())];
    const double delta = score_delta(g, m, d, cache);
    const double full = score(apply_move(g, m), d, cache) - score(g, d, cache);
    ASSERT_NEAR(delta, full, 1e-10 * std::max(1.0, std::abs(score(g, d, cache))));
  }
}

TEST(ScoreDelta, RemoveThenAddCancels) {
  Rng rng(9);
  const Dataset d = testing::random_dataset({2, 2, 2}, 100, rng);
  ScoreCache cache;
  const Dag g = testing::chain3();
  const double removal = score_delta(g, {MoveKind::remove, {0, 1}}, d, cache);
  const double addition = score_delta(apply_move(g, {MoveKind::remove, {0, 1}}), {MoveKind::add, {0, 1}}, d, cache);
  EXPECT_NEAR(removal + addition, 0.0, 1e-12);
}

TEST(ScoreDelta, ReversalExpandsIntoTwoFamilies) {
  Rng rng(10);
  const Dataset d = testing::random_dataset({2, 3, 2, 2}, 150, rng);
  ScoreCache cache;
  // 0 -> 1 with extra parents: 2 -> 0, 3 -> 1.
  const Dag g = Dag::from_arcs(4, {{0, 1}, {2, 0}, {3, 1}});
  const double expected = (family_score(d, 0, set_of({1, 2})) - family_score(d, 0, set_of({2}))) +
                          (family_score(d, 1, set_of({3})) - family_score(d, 1, set_of({0, 3})));
  EXPECT_NEAR(score_delta(g, {MoveKind::reverse, {0, 1}}, d, cache), expected, 1e-10);
  EXPECT_THROW(score_delta(g, {MoveKind::remove, {1, 2}}, d, cache), MissingArcError);
}

TEST(ScoreCacheTest, ConcurrentStoresAreIdempotent) {
  Rng rng(11);
  const Dataset d = testing::random_dataset({2, 2, 3, 2, 2}, 200, rng);
  ScoreCache cache;
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&] {
      for (int child = 0; child < 5; ++child) {
        for (std::uint64_t mask = 0; mask < 32; ++mask) {
          if (mask & (1ULL << child)) continue;
          local_score(d, child, NodeSet(mask), cache);
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  EXPECT_EQ(cache.size(), 5U * 16U);
  for (int child = 0; child < 5; ++child) {
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
      if (mask & (1ULL << child)) continue;
      EXPECT_EQ(*cache.lookup(child, NodeSet(mask)), family_score(d, child, NodeSet(mask)));
    }
  }
  cache.store(0, {}, 123.0);
  EXPECT_EQ(*cache.lookup(0, {}), family_score(d, 0, {}));
  cache.clear();
  EXPECT_EQ(cache.size(), 0U);
}

TEST(DatasetCsv, LabelsMapInFirstAppearanceOrder) {
  std::istringstream in("x,y\nhigh,a\nlow,b\nhigh,b\n");
  const Dataset d = read_dataset_csv(in);
  EXPECT_EQ(d.rows(), 3);
  EXPECT_EQ(d.variable(0).states, (std::vector<std::string>{"high", "low"}));
  EXPECT_EQ(d.value(1, 0), 1);
  EXPECT_EQ(d.value(2, 1), 1);
  std::ostringstream out;
  write_dataset_csv(out, d);
  EXPECT_EQ(out.str(), "x,y\nhigh,a\nlow,b\nhigh,b\n");
}

TEST(DatasetCsv, IntegerStatesAndSidecarArities) {
  std::istringstream in("x,y\n0,2\n1,0\n");
  CsvOptions opts;
  opts.integer_states = true;
  opts.arities = {{"x", 4}};
  const Dataset d = read_dataset_csv(in, opts);
  EXPECT_EQ(d.arity(0), 4);
  EXPECT_EQ(d.arity(1), 3);
  std::istringstream sidecar("# arities\nx:4\n\ny : 3\n");
  EXPECT_EQ(read_arity_sidecar(sidecar), (std::map<std::string, int>{{"x", 4}, {"y", 3}}));
  std::ostringstream out;
  write_arity_sidecar(out, d);
  EXPECT_EQ(out.str(), "x:4\ny:3\n");
}

TEST(DatasetCsv, RejectsMissingAndMalformedCells) {
  for (const char* text : {"x,y\n0,\n", "x,y\n?,1\n", "x,y\nNA,1\n", "x,y\n0\n", ""}) {
    std::istringstream in(text);
    EXPECT_THROW(read_dataset_csv(in), ParseError) << text;
  }
  CsvOptions opts;
  opts.integer_states = true;
  std::istringstream negative("x\n-1\n");
  EXPECT_THROW(read_dataset_csv(negative, opts), ParseError);
  opts.arities = {{"x", 2}};
  std::istringstream too_big("x\n5\n");
  EXPECT_THROW(read_dataset_csv(too_big, opts), Error);
}

TEST(DatasetCsv, ParseErrorCarriesLine) {
  std::istringstream in("x,y\n0,1\n1,?\n");
  try {
    read_dataset_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
}

TEST(DatasetTest, ConstructorValidates) {
  EXPECT_THROW(Dataset({{"x", 1, {}}}, {{0}}), ValidationError);
  EXPECT_THROW(Dataset({{"x", 2, {}}}, {{2}}), ValidationError);
  EXPECT_THROW(Dataset({{"x", 2, {}}, {"y", 2, {}}}, {{0}, {0, 1}}), ValidationError);
}

}  // namespace
}  // namespace bnsl
