#include "bnsl/net_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "bnsl/errors.hpp"
#include "test_support.hpp"

namespace bnsl {
namespace {

const char* kSprinkler = R"(# rain and sprinkler both wet the grass
node wet
states no yes
parents sprinkler rain
cpt
1.0 0.0
0.2 0.8
0.1 0.9
0.01 0.99
end

node rain
states no yes
parents
cpt
0.8 0.2
end

node sprinkler
states off on
parents rain
cpt
0.6 0.4
0.99 0.01
end
)";

BayesNet parse(const std::string& text) {
  std::istringstream in(text);
  return read_network(in);
}

TEST(NetworkFormat, BlocksAreOrderIndependent) {
  const BayesNet net = parse(kSprinkler);
  ASSERT_EQ(net.size(), 3);
  EXPECT_EQ(net.structure.label(0), "wet");
  EXPECT_TRUE(net.structure.has_arc({1, 0}));
  EXPECT_TRUE(net.structure.has_arc({2, 0}));
  EXPECT_TRUE(net.structure.has_arc({1, 2}));
  EXPECT_EQ(net.states[2], (std::vector<std::string>{"off", "on"}));
}

// wet lists parents (sprinkler, rain) = (2, 1); rows come back in ascending
// index order (rain, sprinkler) with sprinkler fastest.
TEST(NetworkFormat, RowsReindexedToAscendingParents) {
  const BayesNet net = parse(kSprinkler);
  ASSERT_EQ(net.cpts[0].size(), 4U);
  EXPECT_EQ(net.cpts[0][0], (std::vector<double>{1.0, 0.0}));   // rain no, sprinkler off
  EXPECT_EQ(net.cpts[0][1], (std::vector<double>{0.1, 0.9}));   // rain no, sprinkler on
  EXPECT_EQ(net.cpts[0][2], (std::vector<double>{0.2, 0.8}));   // rain yes, sprinkler off
  EXPECT_EQ(net.cpts[0][3], (std::vector<double>{0.01, 0.99}));
}

TEST(NetworkFormat, RoundTrip) {
  const BayesNet net = parse(kSprinkler);
  std::ostringstream out;
  write_network(out, net);
  EXPECT_EQ(parse(out.str()), net);

  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const BayesNet random = random_network({}, rng);
    std::ostringstream text;
    write_network(text, random);
    ASSERT_EQ(parse(text.str()), random);
  }
}

TEST(NetworkFormat, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "bnsl_net_io_test.net";
  const BayesNet net = parse(kSprinkler);
  save_network(net, path.string());
  EXPECT_EQ(load_network(path.string()), net);
  std::filesystem::remove(path);
  EXPECT_THROW(load_network(path.string()), ValidationError);
}

TEST(NetworkFormat, RowSumValidation) {
  const std::string bad = "node a\nstates x y\nparents\ncpt\n0.5 0.4\nend\n";
  try {
    parse(bad);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
  }
}

TEST(NetworkFormat, CycleRejected) {
  const std::string cyclic =
      "node a\nstates x y\nparents b\ncpt\n0.5 0.5\n0.5 0.5\nend\n"
      "node b\nstates x y\nparents a\ncpt\n0.5 0.5\n0.5 0.5\nend\n";
  EXPECT_THROW(parse(cyclic), ValidationError);
}

TEST(NetworkFormat, StructuralErrors) {
  EXPECT_THROW(parse("node a\nstates x y\nparents zz\ncpt\n0.5 0.5\nend\n"), ValidationError);
  EXPECT_THROW(parse("node a\nstates x y\nparents\ncpt\n0.5 0.5\n0.5 0.5\nend\n"), ValidationError);
  EXPECT_THROW(parse("node a\nstates x y\nparents\ncpt\n0.5 0.5\n"), ParseError);
  EXPECT_THROW(parse("states x y\n"), ParseError);
  EXPECT_THROW(parse("node a\nstates x y\nparents\ncpt\n0.5 abc\nend\n"), ParseError);
  EXPECT_THROW(parse("node a\nstates x\nparents\ncpt\n1.0\nend\n"), ValidationError);
  try {
    parse("node a\nstates x y\nparents\ncpt\n0.5 abc\nend\n");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5U);
  }
}

TEST(ForwardSample, PointMassesForceEveryRecord) {
  const BayesNet net = parse(
      "node a\nstates x y\nparents\ncpt\n0 1\nend\n"
      "node b\nstates x y z\nparents a\ncpt\n1 0 0\n0 0 1\nend\n");
  Rng rng(2);
  const Dataset d = forward_sample(net, 500, rng);
  for (int r = 0; r < d.rows(); ++r) {
    EXPECT_EQ(d.value(r, 0), 1);
    EXPECT_EQ(d.value(r, 1), 2);
  }
  EXPECT_EQ(d.variable(1).states, (std::vector<std::string>{"x", "y", "z"}));
}

TEST(ForwardSample, RootMarginalWithinThreeSigma) {
  const BayesNet net = parse("node a\nstates no yes\nparents\ncpt\n0.7 0.3\nend\n");
  Rng rng(3);
  const int n = 100000;
  const Dataset d = forward_sample(net, n, rng);
  int ones = 0;
  for (int r = 0; r < n; ++r) ones += d.value(r, 0);
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.3, 0.005);
}

TEST(ForwardSample, RootMarginalsOfRandomNetworks) {
  Rng rng(4);
  const int n = 100000;
  for (int i = 0; i < 3; ++i) {
    const BayesNet net = random_network({}, rng);
    const Dataset d = forward_sample(net, n, rng);
    for (int v = 0; v < net.size(); ++v) {
      if (!net.structure.parents(v).empty()) continue;
      for (int k = 0; k < net.arity(v); ++k) {
        const double p = net.cpts[v][0][k];
        int hits = 0;
        for (int r = 0; r < n; ++r) hits += d.value(r, v) == k;
        EXPECT_NEAR(hits, n * p, 3 * std::sqrt(n * p * (1 - p)) + 1);
      }
    }
  }
}

TEST(ForwardSample, SameSeedSameData) {
  const BayesNet net = parse(kSprinkler);
  Rng a(5);
  Rng b(5);
  const Dataset x = forward_sample(net, 1000, a);
  const Dataset y = forward_sample(net, 1000, b);
  for (int v = 0; v < 3; ++v) {
    EXPECT_TRUE(std::equal(x.column(v).begin(), x.column(v).end(), y.column(v).begin()));
  }
}

// Sampled conditional frequencies follow the canonical row order.
TEST(ForwardSample, ConditionalFrequenciesFollowRows) {
  const BayesNet net = parse(kSprinkler);
  Rng rng(6);
  const Dataset d = forward_sample(net, 200000, rng);
  int n_config = 0;
  int wet = 0;
  for (int r = 0; r < d.rows(); ++r) {
    if (d.value(r, 1) == 0 && d.value(r, 2) == 1) {
      ++n_config;
      wet += d.value(r, 0);
    }
  }
  // rain no, sprinkler on: listed row (on, no) = 0.1 0.9.
  EXPECT_NEAR(static_cast<double>(wet) / n_config, 0.9, 0.02);
}

TEST(RandomNetwork, RespectsOptions) {
  Rng rng(7);
  RandomNetworkOptions opts;
  opts.nodes = 12;
  opts.max_parents = 2;
  opts.min_arity = 3;
  opts.max_arity = 4;
  for (int i = 0; i < 20; ++i) {
    const BayesNet net = random_network(opts, rng);
    EXPECT_NO_THROW(net.validate());
    EXPECT_EQ(net.size(), 12);
    for (int v = 0; v < 12; ++v) {
      EXPECT_LE(net.structure.parents(v).size(), 2);
      EXPECT_GE(net.arity(v), 3);
      EXPECT_LE(net.arity(v), 4);
    }
  }
}

TEST(DagFormat, RoundTrip) {
  Dag g = Dag::from_arcs(3, {{0, 1}, {2, 1}});
  g.set_labels({"a", "b", "c"});
  std::ostringstream out;
  write_dag(out, g);
  EXPECT_EQ(out.str(), "nodes: a,b,c\na -> b\nc -> b\n");
  std::istringstream in(out.str());
  const Dag back = read_dag(in);
  EXPECT_EQ(back, g);
  EXPECT_EQ(back.labels(), g.labels());
}

TEST(DagFormat, Errors) {
  for (const char* text : {"a -> b\n", "nodes: a,b\na -> c\n", "nodes: a,b\na b\n", "nodes: a,a\n",
                           "nodes: a,b\na -> b\nb -> a\n", ""}) {
    std::istringstream in(text);
    EXPECT_THROW(read_dag(in), ParseError) << text;
  }
}

}  // namespace
}  // namespace bnsl
