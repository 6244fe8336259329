#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bnsl/dag.hpp"
#include "bnsl/random.hpp"

namespace bnsl {

inline constexpr int kDefaultTau = 10;

// Repeated covered arc reversal parameters. `tau` bounds the number of
// reversals; the actual count is drawn uniformly from {0, ..., tau}.
struct RcarConfig {
  int tau = kDefaultTau;
  std::uint64_t seed = 0;
};

// Random walk inside the equivalence class of g: draws a repetition count in
// {0..tau}, then reverses that many uniformly chosen covered arcs, stopping
// early if none is left.
Dag rcar(const Dag& g, const RcarConfig& cfg, Rng& rng);
// Same, with a fresh stream seeded from cfg.seed.
Dag rcar(const Dag& g, const RcarConfig& cfg);
void rcar_in_place(Dag& g, int tau, Rng& rng);

// Distinct per-vertex priorities driving the REDS walk.
struct VertexPriorities {
  std::vector<double> r;

  // Throws ConfigError if any two priorities coincide.
  static VertexPriorities from(std::vector<double> values);
  // Uniform draws in [0, 1), resampled until all distinct.
  static VertexPriorities random(int n, Rng& rng);
};

// Random equivalent DAG selection: repeatedly reverses a random covered arc
// x_j -> x_k with r_j < r_k. Returns every intermediate DAG in order; an empty
// sequence means g was already final.
std::vector<Dag> reds(const Dag& g, const VertexPriorities& priorities, Rng& rng);

inline constexpr int kEnumerateClassMaxNodes = 8;

// Closure of g under covered arc reversals, sorted by dag_less.
std::vector<Dag> enumerate_class(const Dag& g);

// Product over undirected components of (number of undirected edges + 1).
std::uint64_t class_size_lower_bound(const Cpdag& p);

inline constexpr int kCensusMaxNodes = 6;

// Visits every labelled DAG on n nodes exactly once (n <= kCensusMaxNodes).
void for_each_dag(int n, const std::function<void(const Dag&)>& visit);

struct CensusResult {
  int n = 0;
  std::uint64_t dags = 0;
  std::uint64_t classes = 0;
  double ratio = 0.0;
};

CensusResult census(int n);

// `n,dags,classes,ratio` (no trailing newline).
std::string census_csv_header();
std::string census_csv_row(const CensusResult& c);

}  // namespace bnsl
