#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "bnsl/dag.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/equivalence.hpp"
#include "bnsl/random.hpp"

namespace bnsl::testing {

inline Dag chain3() { return Dag::from_arcs(3, {{0, 1}, {1, 2}}); }
inline Dag fork3() { return Dag::from_arcs(3, {{1, 0}, {1, 2}}); }
inline Dag reversed_chain3() { return Dag::from_arcs(3, {{2, 1}, {1, 0}}); }
inline Dag collider3() { return Dag::from_arcs(3, {{0, 2}, {1, 2}}); }
inline Dag complete3() { return Dag::from_arcs(3, {{0, 1}, {0, 2}, {1, 2}}); }

// Random DAG: arcs follow a random node order, each present with prob p.
inline Dag random_dag(int n, double p, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Dag g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) g.add_arc({order[i], order[j]});
    }
  }
  return g;
}

// Uniformly random cells with the given arities.
inline Dataset random_dataset(const std::vector<int>& arities, int rows, Rng& rng) {
  std::vector<Variable> vars;
  std::vector<std::vector<int>> cols;
  for (std::size_t v = 0; v < arities.size(); ++v) {
    vars.push_back({"v" + std::to_string(v), arities[v], {}});
    std::vector<int> col(rows);
    for (int& x : col) x = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(arities[v])));
    cols.push_back(std::move(col));
  }
  return Dataset(std::move(vars), std::move(cols));
}

inline Dataset integer_dataset(const std::vector<int>& arities, const std::vector<std::vector<int>>& rows) {
  std::vector<Variable> vars;
  std::vector<std::vector<int>> cols(arities.size());
  for (std::size_t v = 0; v < arities.size(); ++v) vars.push_back({"v" + std::to_string(v), arities[v], {}});
  for (const auto& r : rows) {
    for (std::size_t v = 0; v < arities.size(); ++v) cols[v].push_back(r[v]);
  }
  return Dataset(std::move(vars), std::move(cols));
}

// Acyclicity oracle by brute force: some permutation orders every arc forward.
inline bool acyclic_by_permutation(int n, const std::vector<Arc>& arcs) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[perm[i]] = i;
    if (std::all_of(arcs.begin(), arcs.end(), [&](const Arc& a) { return pos[a.tail] < pos[a.head]; })) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Every DAG on n nodes.
inline std::vector<Dag> all_dags(int n) {
  std::vector<Dag> out;
  for_each_dag(n, [&](const Dag& g) { out.push_back(g); });
  return out;
}

// Log marginal likelihood of one family by sequential Polya-urn prediction:
// p(x_t = k | past) = (a_jk + n_jk) / (a_j + n_j).
inline double polya_family_log_likelihood(const Dataset& data, int child, const std::vector<int>& parents, double ess) {
  double q = 1.0;
  for (int p : parents) q *= data.arity(p);
  const double r = data.arity(child);
  const double a_j = ess / q;
  const double a_jk = ess / (q * r);
  std::map<std::vector<int>, std::map<int, int>> seen;
  double log_lik = 0.0;
  for (int row = 0; row < data.rows(); ++row) {
    std::vector<int> config;
    for (int p : parents) config.push_back(data.value(row, p));
    auto& counts = seen[config];
    int n_j = 0;
    for (const auto& [k, c] : counts) n_j += c;
    const int k = data.value(row, child);
    log_lik += std::log((a_jk + counts[k]) / (a_j + n_j));
    ++counts[k];
  }
  return log_lik;
}

// log p(G, D) through the Polya-urn oracle.
inline double oracle_log_joint(const Dag& g, const Dataset& data, double ess = 1.0) {
  double total = 0.0;
  for (int v = 0; v < g.size(); ++v) total += polya_family_log_likelihood(data, v, g.parents(v).to_vector(), ess);
  return total;
}

// Exact posterior over every DAG on the dataset's variables (uniform prior).
struct ExactPosterior {
  std::vector<Dag> dags;
  std::vector<double> log_joint;
  std::vector<double> probability;
  double log_evidence = 0.0;
};

inline ExactPosterior exact_posterior(const Dataset& data) {
  ExactPosterior out;
  out.dags = all_dags(data.variable_count());
  for (const Dag& g : out.dags) out.log_joint.push_back(oracle_log_joint(g, data));
  const double top = *std::max_element(out.log_joint.begin(), out.log_joint.end());
  double sum = 0.0;
  for (double lj : out.log_joint) sum += std::exp(lj - top);
  out.log_evidence = top + std::log(sum);
  for (double lj : out.log_joint) out.probability.push_back(std::exp(lj - out.log_evidence));
  return out;
}

}  // namespace bnsl::testing
