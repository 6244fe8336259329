#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bnsl/dag.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/neighbourhood.hpp"
#include "bnsl/random.hpp"
#include "bnsl/scoring.hpp"

namespace bnsl {

struct ChainConfig {
  NeighbourhoodKind kind;
  long iterations = 1;
  std::uint64_t seed = 0;
  // Defaults to the empty graph over the dataset's variables.
  std::optional<Dag> start;
  // Multiply the ratio by |N(current)| / |N(candidate)|; deterministic kinds only.
  bool hastings_correction = false;
  int top_k = 5;
  // For RCAR kinds, keep the randomised base even when the proposal is rejected.
  bool rebase_on_reject = false;
  // Record diagnostics every `thin` iterations.
  int thin = 1;

  // Throws ConfigError.
  void validate() const;
};

struct ChainState {
  Dag current;
  double log_score = 0.0;
  long iteration = 0;
  long accepts = 0;
  long rejects = 0;
};

struct DiagnosticsRecord {
  long iteration = 0;
  int edges = 0;
  double log_score = 0.0;
  bool accepted = false;
  int cpdag_id = 0;

  bool operator==(const DiagnosticsRecord&) const = default;
};

// min{1, exp(delta) * hastings}
double acceptance_probability(double log_ratio, double hastings = 1.0);

ChainState initial_state(const Dataset& data, const ChainConfig& cfg, ScoreCache& cache);

// One Metropolis step. Returns whether the proposal was accepted.
bool mc3_step_in_place(ChainState& state, const ChainConfig& cfg, const Dataset& data, ScoreCache& cache, Rng& rng);
ChainState mc3_step(const ChainState& state, const ChainConfig& cfg, const Dataset& data, ScoreCache& cache, Rng& rng);

struct DagTally {
  std::uint64_t visits = 0;
  // log p(G, D)
  double log_joint = 0.0;
};

// log p^(D): the average over the top_k most visited DAGs of
// p(G, D) / p^(G | D), where p^(G | D) is the visit frequency.
double marginal_data_estimate(std::span<const DagTally> tallies, int top_k);

// Per-state bookkeeping of a chain: visited DAGs and their essential graphs.
class VisitLog {
 public:
  struct DagEntry {
    Dag dag;
    double log_score = 0.0;
    std::uint64_t visits = 0;
    int cpdag_id = 0;
  };
  struct ClassEntry {
    Cpdag cpdag;
    long first_iteration = 0;
    std::uint64_t visits = 0;
    std::size_t members = 0;
  };

  // Returns the essential graph id of g (ids follow first-visit order).
  int record(const Dag& g, double log_score, long iteration);

  const std::vector<DagEntry>& dags() const { return dags_; }
  const std::vector<ClassEntry>& classes() const { return classes_; }
  std::vector<DagTally> tallies() const;

 private:
  std::vector<DagEntry> dags_;
  std::vector<ClassEntry> classes_;
  std::unordered_map<Dag, int> dag_index_;
  std::unordered_map<std::string, int> class_index_;
};

struct ChainSummary {
  long iterations = 0;
  long accepts = 0;
  long rejects = 0;
  // accepts / rejects (infinite without rejections).
  double acc_rej_ratio = 0.0;
  double seconds = 0.0;
  double iter_per_sec = 0.0;
  std::size_t distinct_cpdags = 0;
  std::size_t distinct_dags = 0;
  // edge_histogram[e] = recorded states with e arcs.
  std::vector<std::uint64_t> edge_histogram;
  double mean_edges = 0.0;
  double phat_log = 0.0;
};

struct ChainRun {
  std::vector<DiagnosticsRecord> records;
  ChainSummary summary;
  VisitLog visits;
  ChainState final_state;
};

ChainRun run_chain(const Dataset& data, const ChainConfig& cfg, ScoreCache& cache);
ChainRun run_chain(const Dataset& data, const ChainConfig& cfg);

struct ClassBound {
  int cpdag_id = 0;
  long first_iteration = 0;
  std::uint64_t lower_bound = 0;
  std::size_t observed_members = 0;
};

// One row per visited essential graph, in order of first visit.
std::vector<ClassBound> class_bound_report(const VisitLog& visits);

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
void write_summary_csv(std::ostream& out, const ChainSummary& summary);
void write_class_bounds_csv(std::ostream& out, const std::vector<ClassBound>& rows);
void write_edge_histogram_csv(std::ostream& out, const ChainSummary& summary);

}  // namespace bnsl
