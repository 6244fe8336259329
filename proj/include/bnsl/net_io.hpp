#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bnsl/dag.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/random.hpp"

namespace bnsl {

// Discrete Bayesian network. cpts[v] holds one row per configuration of
// parents(v) (ascending node index, mixed radix, last parent fastest), each
// row a distribution over states[v].
struct BayesNet {
  Dag structure;
  std::vector<std::vector<std::string>> states;
  std::vector<std::vector<std::vector<double>>> cpts;

  int size() const { return structure.size(); }
  int arity(int v) const { return static_cast<int>(states[v].size()); }
  std::size_t row_count(int v) const;

  // Throws ValidationError on inconsistent tables.
  void validate() const;
  bool operator==(const BayesNet&) const = default;
};

inline constexpr double kCptRowTolerance = 1e-9;

// Block format, blocks in any order:
//   node <name> / states s1 s2 ... / parents p1 p2 ... / cpt / <rows> / end
// Throws ParseError (with line) or ValidationError.
BayesNet read_network(std::istream& in);
BayesNet load_network(const std::string& path);
// Probabilities are written with 17 significant digits.
void write_network(std::ostream& out, const BayesNet& net);
void save_network(const BayesNet& net, const std::string& path);

// n i.i.d. records, each node drawn from its CPT row given its sampled parents.
Dataset forward_sample(const BayesNet& net, int n, Rng& rng);

struct RandomNetworkOptions {
  int nodes = 10;
  // Expected number of arcs; arcs follow a random node order.
  double expected_arcs = 12.0;
  int max_parents = 3;
  int min_arity = 2;
  int max_arity = 3;
  // Symmetric Dirichlet concentration for each CPT row; small values give
  // peaked, strongly dependent tables.
  double dirichlet_alpha = 0.5;
};

BayesNet random_network(const RandomNetworkOptions& options, Rng& rng);

// DAG text format: `nodes: a,b,c` then one `tail -> head` line per arc.
Dag read_dag(std::istream& in);
Dag load_dag(const std::string& path);
// Arcs are emitted in (tail, head) index order.
void write_dag(std::ostream& out, const Dag& g);
void save_dag(const Dag& g, const std::string& path);

}  // namespace bnsl
